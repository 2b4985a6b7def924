#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace plate {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

enum class ErrorCode {
  domain,
  wood_anomaly,
  winding,
  zero_on_contour,
  ill_conditioned,
  no_plateau,
  convergence,
  invalid_config,
};

// Machine-readable names used in CLI error records.
const char* error_code_name(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct LatticeGeometry {
  double s = 1.0;   // single-grating pitch
  double dx = 1.0;  // column spacing
  double dy = 1.0;  // vertical period
  double gamma() const { return dy / dx; }
  void validate() const;
};

struct IncidentWave {
  double beta = 1.0;
  double psi = 0.0;
  double kappa_x() const;
  double kappa_y() const;
  void validate() const;
};

// Root of w2 on the branch with Im >= 0 (Re > 0 when w2 is positive real).
inline cplx sqrt_upper(cplx w2) {
  cplx w = std::sqrt(w2);
  if (w.imag() < 0.0 || (w.imag() == 0.0 && w.real() < 0.0)) w = -w;
  return w;
}

}  // namespace plate
