#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plate/factorize.hpp"

namespace plate {

struct CoefficientSequence {
  std::vector<cplx> A;            // A_0 .. A_kmax
  std::vector<double> positions;  // k * pitch
  std::vector<cplx> b_minus;      // b_{-1} .. b_{-n}, total displacement left of the array
  bool amplification_warning = false;
};

// Incident data along the array: u_i at site k is t^k; the forcing pole of
// A+ sits at z_i = 1/t. Uses the damped beta of the spec.
struct Forcing {
  cplx kappa;  // kappa_x (damped) along the array direction
  cplx t;
  cplx pole;
};
Forcing forcing_for(const KernelSpec& spec, const IncidentWave& wave);

// Kernel spec for a wave: kappa_y = beta sin psi in lattice mode unless
// kappa_y_override is given.
KernelSpec kernel_spec_for(KernelMode mode, const LatticeGeometry& g, const IncidentWave& wave,
                           double delta_beta, std::optional<double> kappa_y_override = {});

class WienerHopf {
 public:
  WienerHopf(const KernelSpec& spec, const IncidentWave& wave, const FactorizationConfig& cfg);

  const FactorizedKernel& factorization() const { return fk_; }
  const Forcing& forcing() const { return f_; }
  cplx k_minus_at_pole() const { return km_pole_; }

  struct APlus {
    cplx value;
    bool pole_proximity;
  };
  // A+(z) = -1 / (K+(z) K-(z_i) (1 - z t))
  APlus a_plus(cplx z) const;

  // A_0..A_kmax. Warped mode: Taylor coefficients of 1/K+ convolved with the
  // geometric series of the forcing. Circle mode: trapezoid inversion on
  // |z| = e^{-delta_c} with e^{k delta_c} compensation.
  CoefficientSequence coefficients(int k_max) const;

  // Total displacements b_{-1}..b_{-n_max} at the free sites left of the array.
  std::vector<cplx> displacements(int n_max) const;

  // Scattered-displacement transform D-(z) = (1 - K-(z)/K-(z_i)) / (1 - t z).
  cplx scattered_displacement_transform(cplx z) const;

 private:
  FactorizedKernel fk_;
  IncidentWave wave_;
  Forcing f_;
  cplx km_pole_;
};

enum class DecayClass { propagating, localized };

struct DecayOptions {
  int window = 10;            // steps the ratio must stay flat for a plateau
  double plateau_tol = 1e-3;  // relative change per step
  double band = 0.02;         // |lambda| >= 1 - band => propagating
  bool allow_fit = true;      // fall back to a log-linear fit when no plateau
  int fit_window = 40;
};

struct DecayEstimate {
  cplx lambda;
  double modulus;
  DecayClass classification;
  bool plateau;
  std::vector<cplx> ratios;  // A_{k+1}/A_k over the probe window
};

// lambda = lim A_{k+1}/A_k estimated near k_probe. Throws no_plateau when the
// ratios do not settle and the fit fallback is disabled or ill-defined.
DecayEstimate decay_ratio(const std::vector<cplx>& A, int k_probe, const DecayOptions& opt = {});

const char* decay_class_name(DecayClass c);

}  // namespace plate
