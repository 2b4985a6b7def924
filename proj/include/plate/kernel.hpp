#pragma once

#include <vector>

#include "plate/greens.hpp"
#include "plate/types.hpp"

namespace plate {

enum class KernelMode { single_grating, half_plane_lattice };

struct KernelSpec {
  KernelMode mode = KernelMode::single_grating;
  LatticeGeometry geometry;
  double beta = 1.0;
  double kappa_y = 0.0;      // lattice mode only
  double delta_beta = 0.0;   // beta -> beta + i delta_beta
  int N = 5000;              // direct-series truncation

  cplx beta_damped() const { return {beta, delta_beta}; }
  // spacing of the kernel's sequence index: s or d_x
  double pitch() const { return mode == KernelMode::single_grating ? geometry.s : geometry.dx; }
  void validate() const;
};

struct KernelValue {
  cplx value;
  double error_estimate;
};

// Propagators G_0..G_n: free-space (grating mode) or column (lattice mode)
// Green's function at separations j * pitch, evaluated at the damped beta.
std::vector<cplx> kernel_coefficients(const KernelSpec& spec, int n);

// Direct series K(z) = sum_{|j| <= N} G_j z^j with G_j the free-space (grating
// mode) or column (lattice mode) Green's function at separation |j| * pitch.
// With add_remainder (grating mode) the tail j > N is added through R(z).
KernelValue kernel_eval(const KernelSpec& spec, cplx z, bool add_remainder = false);

// Closed form of the same kernel from the order sums; converges for all z
// in the annulus bounded by the nearest singularities. P = 0 picks a default.
cplx kernel_spectral(const KernelSpec& spec, cplx z, int P = 0);

// e^{-i pi/4} sqrt(2/(beta s)) [F(z e^{i beta s}) + F(z^{-1} e^{i beta s})]:
// leading-order Hankel asymptotics of sum_{j > N} bracket(beta s j)(z^j + z^-j).
cplx kernel_remainder(cplx z, int N, cplx beta, double s);

// F(w) = (2/pi) w^{N+1} int_0^inf e^{-t^2 (N+1)} / (1 - w e^{-t^2}) dt
//      = sum_{j > N} w^j / sqrt(pi j).
cplx remainder_F(cplx w, int N);

// Singular points of K near |z| = 1: branch points (grating mode) or poles
// (lattice mode). distance = |log |z||.
struct KernelSingularity {
  double angle;
  double distance;
  bool inside;  // |z| < 1
};
std::vector<KernelSingularity> kernel_singularities(const KernelSpec& spec, double max_distance);

}  // namespace plate
