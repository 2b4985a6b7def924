#include "plate/wienerhopf.hpp"

#include <cmath>
#include <numeric>

namespace plate {

KernelSpec kernel_spec_for(KernelMode mode, const LatticeGeometry& g, const IncidentWave& wave,
                           double delta_beta, std::optional<double> kappa_y_override) {
  KernelSpec k;
  k.mode = mode;
  k.geometry = g;
  k.beta = wave.beta;
  k.kappa_y = mode == KernelMode::half_plane_lattice ? kappa_y_override.value_or(wave.kappa_y()) : 0.0;
  k.delta_beta = delta_beta;
  return k;
}

Forcing forcing_for(const KernelSpec& spec, const IncidentWave& wave) {
  const cplx b = spec.beta_damped();
  Forcing f;
  if (spec.mode == KernelMode::single_grating) f.kappa = b * std::cos(wave.psi);
  else f.kappa = sqrt_upper(b * b - spec.kappa_y * spec.kappa_y);
  f.t = std::exp(I * f.kappa * spec.pitch());
  f.pole = 1.0 / f.t;
  if (std::abs(f.pole) < 1.0 - 1e-15)
    throw Error(ErrorCode::domain, "incident wave must travel into the array (cos psi >= 0)");
  return f;
}

WienerHopf::WienerHopf(const KernelSpec& spec_in, const IncidentWave& wave,
                       const FactorizationConfig& cfg)
    : fk_([&] {
        KernelSpec s = spec_in;
        if (s.delta_beta == 0.0) s.delta_beta = cfg.delta;
        return factorize(s, cfg, forcing_for(s, wave).pole);
      }()),
      wave_(wave),
      f_(forcing_for(fk_.spec(), wave)),
      km_pole_(fk_.k_minus(f_.pole)) {}

WienerHopf::APlus WienerHopf::a_plus(cplx z) const {
  const cplx d = 1.0 - z * f_.t;
  return {-1.0 / (fk_.k_plus(z) * km_pole_ * d), std::abs(d) < 1e-8};
}

CoefficientSequence WienerHopf::coefficients(int k_max) const {
  if (k_max < 0) throw Error(ErrorCode::domain, "coefficients: k_max < 0");
  CoefficientSequence out;
  out.A.resize(k_max + 1);
  const double h = fk_.spec().pitch();
  for (int k = 0; k <= k_max; ++k) out.positions.push_back(k * h);

  if (fk_.mode() == FactorizationMode::circle_radius) {
    const double dc = fk_.contour_offset();
    const int n = fk_.nodes();
    if (k_max >= n / 2) throw Error(ErrorCode::domain, "coefficients: k_max exceeds node count");
    const double r = std::exp(-dc);
    const std::vector<cplx> lp = fk_.log_k_plus_on_circle(r, n);
    std::vector<cplx> ap(n);
    for (int j = 0; j < n; ++j) {
      const cplx z = std::polar(r, 2.0 * pi * j / n);
      ap[j] = -1.0 / (std::exp(lp[j]) * km_pole_ * (1.0 - z * f_.t));
    }
    for (int k = 0; k <= k_max; ++k) {
      cplx acc = 0.0;
      for (int j = 0; j < n; ++j) acc += ap[j] * std::polar(1.0, -2.0 * pi * double(k) * j / n);
      out.A[k] = acc / double(n) * std::exp(k * dc);
    }
    out.amplification_warning = std::exp(k_max * dc) > 1e6;
    return out;
  }

  const std::vector<cplx> a = fk_.inverse_plus_taylor(k_max);
  // A_k = -(1/K-(z_i)) sum_{l <= k} a_l t^{k-l}
  cplx run = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    run = run * f_.t + a[k];
    out.A[k] = -run / km_pole_;
  }
  return out;
}

cplx WienerHopf::scattered_displacement_transform(cplx z) const {
  return (1.0 - fk_.k_minus(z) / km_pole_) / (1.0 - f_.t * z);
}

std::vector<cplx> WienerHopf::displacements(int n_max) const {
  if (n_max < 1) return {};
  // d_{-n} = (1/2 pi) int D-(e^{i theta}) e^{i n theta} d theta on the
  // unit circle, with nodes graded at the kernel's singular angles.
  std::vector<WarpCenter> centers;
  for (const auto& s : kernel_singularities(fk_.spec(), 0.5)) centers.push_back({s.angle, s.distance});
  for (const cplx& z0 : kernel_zeros_near_circle(fk_.spec(), 0.5)) {
    const double d = std::abs(std::log(std::abs(z0)));
    centers.push_back({std::arg(z0), d});
    centers.push_back({-std::arg(z0), d});
  }
  const AngleWarp warp(centers);
  int M = std::max(fk_.nodes(), int(std::ceil(4.0 * warp.total_weight() * (n_max + 1))));
  M += M % 2;
  std::vector<cplx> d(n_max, 0.0);
  for (int m = 0; m < M; ++m) {
    const double th = warp.theta(2.0 * pi * (m + 0.5) / M);
    const cplx z = std::polar(1.0, th);
    cplx v = scattered_displacement_transform(z) * ((2.0 * pi / M) / warp.du(th));
    for (int n = 1; n <= n_max; ++n) {
      v *= z;
      d[n - 1] += v;
    }
  }
  std::vector<cplx> b(n_max);
  for (int n = 1; n <= n_max; ++n) b[n - 1] = std::pow(f_.t, -n) + d[n - 1] / (2.0 * pi);
  return b;
}

const char* decay_class_name(DecayClass c) {
  return c == DecayClass::propagating ? "propagating" : "localized";
}

DecayEstimate decay_ratio(const std::vector<cplx>& A, int k_probe, const DecayOptions& opt) {
  if (k_probe < opt.window + 1 || k_probe >= int(A.size()))
    throw Error(ErrorCode::domain, "decay_ratio: k_probe outside the coefficient range");
  DecayEstimate est;
  for (int k = k_probe - opt.window; k < k_probe; ++k) {
    if (A[k] == cplx(0.0)) throw Error(ErrorCode::domain, "decay_ratio: zero coefficient");
    est.ratios.push_back(A[k + 1] / A[k]);
  }
  double worst = 0.0;
  for (size_t i = 1; i < est.ratios.size(); ++i)
    worst = std::max(worst, std::abs(est.ratios[i] - est.ratios[i - 1]) / std::abs(est.ratios[i - 1]));
  est.plateau = worst < opt.plateau_tol;
  if (est.plateau) {
    est.lambda = est.ratios.back();
  } else {
    if (!opt.allow_fit) {
      std::string seq;
      for (const cplx& r : est.ratios) seq += " " + std::to_string(std::abs(r));
      throw Error(ErrorCode::no_plateau, "decay_ratio: ratios do not settle; |ratios| =" + seq);
    }
    // least-squares slope of log|A_k| over the fit window
    const int k0 = std::max(0, k_probe - opt.fit_window);
    const int m = k_probe - k0 + 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int k = k0; k <= k_probe; ++k) {
      const double y = std::log(std::abs(A[k]));
      sx += k;
      sy += y;
      sxx += double(k) * k;
      sxy += k * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const cplx mean = std::accumulate(est.ratios.begin(), est.ratios.end(), cplx(0.0));
    est.lambda = std::polar(std::exp(slope), std::arg(mean));
  }
  est.modulus = std::abs(est.lambda);
  est.classification = est.modulus >= 1.0 - opt.band ? DecayClass::propagating : DecayClass::localized;
  return est;
}

}  // namespace plate
