#include "plate/greens.hpp"

#include <cmath>

#include "plate/specfun.hpp"

namespace plate::greens {

namespace {

void check_beta(cplx beta) {
  if (!(beta.real() > 0.0) || beta.imag() < 0.0)
    throw Error(ErrorCode::domain, "beta must have Re > 0 and Im >= 0");
}

}  // namespace

cplx green_free(cplx beta, double rho) {
  check_beta(beta);
  if (rho < 0.0) throw Error(ErrorCode::domain, "green_free: rho < 0");
  const cplx pref = I / (8.0 * beta * beta);
  if (rho == 0.0) return pref;
  return pref * specfun::biharmonic_bracket(beta * rho);
}

cplx grating_green_direct(cplx beta, double x, double y, double kappa, double d, int N) {
  check_beta(beta);
  if (N < 0) throw Error(ErrorCode::domain, "grating_green: N < 0");
  // pairs j, -j from the far end inwards
  cplx acc = 0.0;
  for (int j = N; j >= 1; --j) {
    const double a = y - j * d, b = y + j * d;
    const cplx ph = std::exp(I * (kappa * (j * d)));
    acc += specfun::biharmonic_bracket(beta * std::hypot(x, a)) * ph +
           specfun::biharmonic_bracket(beta * std::hypot(x, b)) / ph;
  }
  acc += specfun::biharmonic_bracket(beta * std::hypot(x, y));
  return I / (8.0 * beta * beta) * acc;
}

cplx grating_green(double beta, double x, double kappa_y, double dy, int N, double delta,
                   double tol) {
  if (!(beta > 0.0)) throw Error(ErrorCode::domain, "grating_green: beta <= 0");
  if (delta < 0.0) throw Error(ErrorCode::domain, "grating_green: delta < 0");
  if (!(dy > 0.0)) throw Error(ErrorCode::domain, "grating_green: dy <= 0");
  if (N >= 1) {
    double bound = std::sqrt(2.0 / (pi * beta * N * dy)) / (8.0 * beta * beta);
    if (delta > 0.0) bound *= std::exp(-delta * N * dy) * std::min(1.0, 1.0 / (delta * dy));
    if (delta == 0.0 && bound > tol)
      throw Error(ErrorCode::convergence,
                  "grating_green: undamped truncation bound " + std::to_string(bound) +
                      " exceeds tolerance");
  }
  return grating_green_direct(cplx(beta, delta), x, 0.0, kappa_y, dy, N);
}

cplx grating_green_spectral(cplx beta, double across, double along, cplx kappa, double d,
                            const SumOptions& opt) {
  return I / (8.0 * beta * beta) * periodic_bracket_sum(beta, kappa, d, along, across, opt);
}

cplx lattice_sum_accelerated(double beta, double kappa, double s, int P) {
  SumOptions opt;
  opt.P = P;
  opt.tail = false;
  return periodic_bracket_sum(beta, kappa, s, 0.0, 0.0, opt);
}

cplx lattice_sum_accelerated(cplx beta, cplx kappa, double s, int P) {
  SumOptions opt;
  opt.P = P;
  opt.tail = false;
  return periodic_bracket_sum(beta, kappa, s, 0.0, 0.0, opt);
}

cplx rayleigh_field(cplx beta, double kappa, double s, double x, double y, int P) {
  if (y == 0.0) throw Error(ErrorCode::domain, "rayleigh_field: y = 0");
  SumOptions opt;
  opt.P = P;
  return I / (8.0 * beta * beta) * periodic_bracket_sum(beta, kappa, s, x, y, opt);
}

std::vector<GratingSumTerm> grating_sum_terms(double beta, double kappa, double s, int P) {
  std::vector<GratingSumTerm> out;
  out.reserve(2 * P + 1);
  for (int p = -P; p <= P; ++p) {
    const double kp = kappa + 2.0 * pi * p / s;
    GratingSumTerm t;
    t.p = p;
    t.kappa_p = kp;
    t.chi_p = sqrt_upper(beta * beta - kp * kp);
    t.tau_p = std::sqrt(beta * beta + kp * kp);
    t.propagating = kp * kp <= beta * beta;
    out.push_back(t);
  }
  return out;
}

int propagating_order_count(double beta, double kappa, double s) {
  const double step = 2.0 * pi / s;
  const int lo = int(std::ceil((-beta - kappa) / step));
  const int hi = int(std::floor((beta - kappa) / step));
  return std::max(0, hi - lo + 1);
}

void check_wood(double beta, double kappa, double s, double guard) {
  const double step = 2.0 * pi / s;
  const double b2 = beta * beta;
  for (double sgn : {-1.0, 1.0}) {
    // nearest order to kappa_p = sgn beta
    const double p = std::round((sgn * beta - kappa) / step);
    const double kp = kappa + p * step;
    if (std::abs(b2 - kp * kp) < guard * b2)
      throw Error(ErrorCode::wood_anomaly,
                  "Wood anomaly: order " + std::to_string(int(p)) + " passes off (beta = " +
                      std::to_string(beta) + ")");
  }
}

}  // namespace plate::greens
