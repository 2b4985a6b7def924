#pragma once

#include <vector>

#include "plate/types.hpp"

namespace plate::greens {

struct SumOptions {
  int P = 200;                // spectral orders kept on each side
  bool tail = true;           // add the asymptotic tail beyond P (on-axis sums)
  double wood_guard = 1e-8;   // relative guard on min_p |beta^2 - kappa_p^2|
};

// (i/8beta^2)(H0(beta rho) + (2i/pi) K0(beta rho)); i/8beta^2 at rho = 0.
cplx green_free(cplx beta, double rho);

// Direct quasi-periodic column sum over |j| <= N at horizontal offset x from
// a column of pins spaced dy, Bloch phase e^{i kappa_y j dy}, evaluated at
// beta + i delta. Throws convergence when delta = 0 and the 1/sqrt(N) tail
// bound exceeds tol.
cplx grating_green(double beta, double x, double kappa_y, double dy, int N,
                   double delta, double tol = 1e-4);

// Direct sum with an explicit (complex) beta; no tail check.
cplx grating_green_direct(cplx beta, double x, double y, double kappa, double d, int N);

// Same column sum in spectral form, offset `across` from the column and
// `along` it. Exponentially convergent for across != 0.
cplx grating_green_spectral(cplx beta, double across, double along, cplx kappa, double d,
                            const SumOptions& opt = {});

// sum_j bracket(beta |r - r_j|) e^{i kappa j d}, pins r_j = (j d, 0), point
// r = (along, across). Equals
//   (2/d) sum_p e^{i kappa_p along} [e^{i chi_p |across|}/chi_p + i e^{-tau_p |across|}/tau_p].
cplx periodic_bracket_sum(cplx beta, cplx kappa, double d, double along, double across,
                          const SumOptions& opt);

// Truncated order sum (2/s) sum_{|p| <= P} (1/chi_p + i/tau_p), i.e. the
// on-axis grating sum S_0^H + (2i/pi) S_0^K + 1. Throws wood_anomaly near a
// passing-off order.
cplx lattice_sum_accelerated(double beta, double kappa, double s, int P = 200);
cplx lattice_sum_accelerated(cplx beta, cplx kappa, double s, int P);

// Tail of the order sum beyond |p| = P from its large-|kappa_p| expansion
//   1/chi_p + i/tau_p ~ -i (beta^2/kappa_p^3 + (5/8) beta^6/kappa_p^7),
// summed in closed form with Hurwitz zeta values. Excludes the 2/s factor.
cplx order_sum_tail(cplx beta, cplx kappa, double s, int P);

// Plane-wave (Rayleigh) form of the single-grating Green's function sum at
// (x along, y across), |y| > 0.
cplx rayleigh_field(cplx beta, double kappa, double s, double x, double y, int P = 200);

struct GratingSumTerm {
  int p;
  double kappa_p;
  cplx chi_p;
  double tau_p;
  bool propagating;
};

std::vector<GratingSumTerm> grating_sum_terms(double beta, double kappa, double s, int P);
int propagating_order_count(double beta, double kappa, double s);

// Throws wood_anomaly if some order satisfies |beta^2 - kappa_p^2| < guard beta^2.
void check_wood(double beta, double kappa, double s, double guard = 1e-8);

// Hurwitz zeta(n, q) for integer n >= 2 and Re q large enough (>= ~5).
cplx hurwitz_zeta(int n, cplx q);

}  // namespace plate::greens
