#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "plate/kernel.hpp"

namespace plate {

enum class FactorizationMode {
  warped,         // unit-circle Cauchy integrals, nodes graded at singular angles
  circle_radius,  // uniform trapezoid on |z| = e^{+-delta_c}, FFT Laurent split
};

struct FactorizationConfig {
  double delta = 0.0025;   // regularization: beta -> beta + i delta when spec is undamped
  int n_intervals = 1200;  // trapezoid intervals on [0, 2 pi]
  FactorizationMode mode = FactorizationMode::warped;
  double zero_guard = 1e-10;  // |K| below guard * max|K| on a contour is a zero
  void validate() const;
};

// A point the warped quadrature should resolve: angle on the circle and
// distance |log|z|| of the nearby singularity.
struct WarpCenter {
  double angle;
  double distance;
};

// Monotone map u(theta) of [0, 2pi) onto itself whose derivative is a
// mixture of Poisson kernels peaked at the centres; uniform nodes in u give
// nodes in theta clustered at the centres.
class AngleWarp {
 public:
  AngleWarp() = default;
  explicit AngleWarp(const std::vector<WarpCenter>& centers);
  double u(double theta) const;
  double du(double theta) const;  // u'(theta)
  double theta(double u) const;   // inverse
  double total_weight() const { return norm_; }

 private:
  struct Bump {
    double angle, r, weight;
  };
  std::vector<Bump> bumps_;
  double norm_ = 1.0;
};

class FactorizedKernel {
 public:
  struct Impl;

  FactorizedKernel(std::shared_ptr<const Impl> impl);

  const KernelSpec& spec() const;  // with the damping actually used
  FactorizationMode mode() const;
  int winding_number() const;  // always 0 on a successfully built instance
  int nodes() const;

  // log K+ for |z| <= 1 (warped) / inside C- (circle mode), log K- outside.
  cplx log_k_plus(cplx z) const;
  cplx log_k_minus(cplx z) const;
  cplx k_plus(cplx z) const { return std::exp(log_k_plus(z)); }
  cplx k_minus(cplx z) const { return std::exp(log_k_minus(z)); }
  cplx kernel(cplx z) const;  // K(z) evaluated in closed form

  // Taylor coefficients a_0..a_lmax of 1/K+(z).
  std::vector<cplx> inverse_plus_taylor(int lmax) const;

  // log K+ at m uniformly spaced points on |z| = radius (theta_j = 2 pi j/m).
  std::vector<cplx> log_k_plus_on_circle(double radius, int m) const;

  // Circle-radius mode: the contour offset delta_c (0 in warped mode).
  double contour_offset() const;

 private:
  std::shared_ptr<const Impl> impl_;
};

// Builds K+ K- = K. forcing_pole, when given, is clustered by the quadrature
// so that K- can be evaluated accurately there. Throws winding or
// zero_on_contour errors.
FactorizedKernel factorize(const KernelSpec& spec, const FactorizationConfig& cfg,
                           std::optional<cplx> forcing_pole = std::nullopt);

// Zeros of K within max_distance of the unit circle, from a scan of |K| on
// the circle followed by Newton refinement. Only zeros with |z| <= 1 are
// returned; their mirror images 1/z are zeros too.
std::vector<cplx> kernel_zeros_near_circle(const KernelSpec& spec, double max_distance,
                                           int scan_points = 4096);

}  // namespace plate
