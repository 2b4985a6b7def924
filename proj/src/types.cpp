#include "plate/types.hpp"

#include <cmath>

namespace plate {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::domain: return "DOMAIN_ERROR";
    case ErrorCode::wood_anomaly: return "WOOD_ANOMALY";
    case ErrorCode::winding: return "WINDING_ERROR";
    case ErrorCode::zero_on_contour: return "ZERO_ON_CONTOUR";
    case ErrorCode::ill_conditioned: return "ILL_CONDITIONED";
    case ErrorCode::no_plateau: return "NO_PLATEAU";
    case ErrorCode::convergence: return "CONVERGENCE_ERROR";
    case ErrorCode::invalid_config: return "INVALID_CONFIG";
  }
  return "UNKNOWN";
}

void LatticeGeometry::validate() const {
  if (!(s > 0.0) || !(dx > 0.0) || !(dy > 0.0) || !std::isfinite(s) ||
      !std::isfinite(dx) || !std::isfinite(dy))
    throw Error(ErrorCode::invalid_config, "lattice spacings must be positive and finite");
}

double IncidentWave::kappa_x() const { return beta * std::cos(psi); }
double IncidentWave::kappa_y() const { return beta * std::sin(psi); }

void IncidentWave::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw Error(ErrorCode::invalid_config, "beta must be positive");
  if (!std::isfinite(psi)) throw Error(ErrorCode::invalid_config, "psi must be finite");
}

}  // namespace plate
