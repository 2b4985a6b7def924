#include "plate/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "plate/dispersion.hpp"

namespace plate {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::vector<std::string> assumption_flags(const RunConfig& cfg) {
  std::vector<std::string> a;
  // contours scan the whole zone, so no kappa_y rule applies
  if ((cfg.mode == KernelMode::half_plane_lattice && cfg.command != Command::contours) ||
      cfg.command == Command::stack_modes)
    a.push_back(cfg.kappa_y ? "kappa_y=fixed" : "kappa_y=beta*sin(psi)");
  if (cfg.command == Command::coeffs || cfg.command == Command::field || cfg.command == Command::kernel_check)
    a.push_back("damping=beta+i*delta for both solvers");
  if (cfg.command == Command::energy) a.push_back("infinite grating, unit incident amplitude");
  return a;
}

class Writer {
 public:
  Writer(const RunConfig& cfg, RunResult& res) : cfg_(cfg), res_(res) { fs::create_directories(cfg.out); }

  std::ofstream csv(const std::string& name, const std::string& columns) {
    std::ofstream f = open(name);
    f << "# " << tool_version << "\n";
    for (const auto& [k, v] : resolved_settings(cfg_)) f << "# " << k << "=" << v << "\n";
    for (const auto& a : assumption_flags(cfg_)) f << "# assumption: " << a << "\n";
    f << columns << "\n";
    return f;
  }

  void json_file(const std::string& name, json body) {
    json doc;
    doc["meta"] = meta();
    for (auto& [k, v] : body.items()) doc[k] = v;
    std::ofstream f = open(name);
    f << doc.dump(2) << "\n";
  }

  json meta() const {
    json m;
    m["version"] = tool_version;
    json c;
    for (const auto& [k, v] : resolved_settings(cfg_)) c[k] = v;
    m["config"] = c;
    m["assumptions"] = assumption_flags(cfg_);
    return m;
  }

 private:
  std::ofstream open(const std::string& name) {
    const fs::path p = fs::path(cfg_.out) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::invalid_config, "cannot write '" + p.string() + "'");
    res_.files.push_back(p.string());
    return f;
  }
  const RunConfig& cfg_;
  RunResult& res_;
};

std::string row(std::initializer_list<std::string> cells) {
  std::string s;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) s += ',';
    s += c;
    first = false;
  }
  return s;
}

std::string f17(double v) { return fmt17(v); }
std::string i2s(long v) { return std::to_string(v); }

std::vector<double> sweep_values(const RunConfig& cfg) {
  std::vector<double> v;
  const long n = std::lround(std::floor((cfg.beta_stop - cfg.beta_start) / cfg.beta_step + 1e-9));
  for (long k = 0; k <= n; ++k) v.push_back(cfg.beta_start + k * cfg.beta_step);
  return v;
}

KernelSpec spec_of(const RunConfig& cfg, double delta) {
  return kernel_spec_for(cfg.mode, cfg.geometry, cfg.wave, delta, cfg.kappa_y);
}

FactorizationConfig fact_of(const RunConfig& cfg) {
  FactorizationConfig f;
  f.delta = cfg.delta;
  f.n_intervals = cfg.intervals;
  f.mode = cfg.factorization;
  return f;
}

json decay_json(const std::vector<cplx>& A, int k_max) {
  const int probe = std::min<int>(k_max, int(A.size()) - 1);
  json d;
  try {
    const DecayEstimate e = decay_ratio(A, probe);
    d["k_probe"] = probe;
    d["lambda"] = {e.lambda.real(), e.lambda.imag()};
    d["modulus"] = e.modulus;
    d["class"] = decay_class_name(e.classification);
    d["plateau"] = e.plateau;
  } catch (const Error& ex) {
    d["error"] = {{"code", error_code_name(ex.code())}, {"message", ex.what()}};
  }
  return d;
}

void write_coeffs(Writer& w, const std::string& name, const CoefficientSequence& c, int k_max) {
  auto f = w.csv(name, "k,position,A_re,A_im,abs_A");
  for (int k = 0; k <= k_max && k < int(c.A.size()); ++k)
    f << row({i2s(k), f17(c.positions[k]), f17(c.A[k].real()), f17(c.A[k].imag()), f17(std::abs(c.A[k]))})
      << "\n";
}

int cmd_coeffs(const RunConfig& cfg, Writer& w) {
  const KernelSpec spec = spec_of(cfg, cfg.delta);
  int status = 0;
  json summary;
  std::vector<cplx> af, aw;
  if (cfg.solver != Solver::wiener_hopf) {
    const FoldySolution sol = foldy_solve({spec, cfg.n_pins}, cfg.wave);
    af = sol.coeffs.A;
    write_coeffs(w, "coeffs_foldy.csv", sol.coeffs, cfg.k_max);
    summary["foldy"] = {{"residual", sol.residual}, {"condition", sol.condition},
                        {"ill_conditioned", sol.ill_conditioned}, {"decay", decay_json(af, cfg.k_max)}};
    if (sol.ill_conditioned) status = 3;
  }
  if (cfg.solver != Solver::foldy) {
    const WienerHopf wh(spec, cfg.wave, fact_of(cfg));
    const CoefficientSequence c = wh.coefficients(cfg.k_max);
    aw = c.A;
    write_coeffs(w, "coeffs_wh.csv", c, cfg.k_max);
    summary["wiener_hopf"] = {{"amplification_warning", c.amplification_warning},
                              {"decay", decay_json(aw, cfg.k_max)}};
  }
  if (cfg.solver == Solver::both) {
    double mx = 0.0, worst = 0.0;
    for (int k = 0; k <= cfg.k_max; ++k) mx = std::max(mx, std::abs(af[k]));
    auto f = w.csv("comparison.csv", "k,abs_foldy,abs_wh,rel_diff");
    for (int k = 0; k <= cfg.k_max; ++k) {
      const double d = std::abs(std::abs(af[k]) - std::abs(aw[k])) / mx;
      worst = std::max(worst, d);
      f << row({i2s(k), f17(std::abs(af[k])), f17(std::abs(aw[k])), f17(d)}) << "\n";
    }
    summary["comparison"] = {{"max_rel_diff", worst}, {"normalisation", "max_k |A_k| (foldy)"}};
  }
  w.json_file("coeffs.json", summary);
  return status;
}

int cmd_field(const RunConfig& cfg, Writer& w) {
  const KernelSpec spec = spec_of(cfg, cfg.delta);
  const ScattererSet set{spec, cfg.n_pins};
  std::vector<cplx> A;
  int status = 0;
  if (cfg.solver == Solver::foldy) {
    const FoldySolution sol = foldy_solve(set, cfg.wave);
    A = sol.coeffs.A;
    if (sol.ill_conditioned) status = 3;
  } else {
    A = WienerHopf(spec, cfg.wave, fact_of(cfg)).coefficients(cfg.n_pins - 1).A;
  }
  const FieldMap m = foldy_field(set, cfg.wave, A, cfg.grid);
  auto f = w.csv("field.csv", "x,y,inc_re,inc_im,sc_re,sc_im,tot_re,tot_im");
  for (int j = 0; j < m.grid.ny; ++j)
    for (int i = 0; i < m.grid.nx; ++i) {
      const cplx a = m.at(m.incident, i, j), b = m.at(m.scattered, i, j), c = m.at(m.total, i, j);
      f << row({f17(m.x[i]), f17(m.y[j]), f17(a.real()), f17(a.imag()), f17(b.real()), f17(b.imag()),
                f17(c.real()), f17(c.imag())})
        << "\n";
    }
  return status;
}

int cmd_energy(const RunConfig& cfg, Writer& w) {
  auto f = w.csv("energy.csv", "beta,R_tot,T_tot,sum,n_orders,anomaly");
  int anomalies = 0;
  double worst = 0.0;
  for (double b : sweep_values(cfg)) {
    try {
      const GratingEnergy e = infinite_grating_energy({b, cfg.wave.psi}, cfg.geometry.s);
      const double sum = e.reflected_total + e.transmitted_total;
      worst = std::max(worst, std::abs(sum - 1.0));
      f << row({f17(b), f17(e.reflected_total), f17(e.transmitted_total), f17(sum), i2s(long(e.orders.size())),
                "0"})
        << "\n";
    } catch (const Error& ex) {
      if (ex.code() != ErrorCode::wood_anomaly) throw;
      ++anomalies;
      f << row({f17(b), "nan", "nan", "nan", "0", "1"}) << "\n";
    }
  }
  const auto total = sweep_values(cfg).size();
  if (size_t(anomalies) == total)
    throw Error(ErrorCode::wood_anomaly, "energy: every sweep value sits on a pass-off");
  w.json_file("energy.json", {{"max_conservation_error", worst}, {"anomalous_rows", anomalies}});
  return 0;
}

int cmd_contours(const RunConfig& cfg, Writer& w) {
  ContourOptions co;
  co.nx = co.ny = cfg.contour_grid;
  std::vector<IsoContour> sweep;
  auto f = w.csv("contours.csv", "beta,polyline,vertex,kx,ky");
  json per_beta = json::array();
  for (double b : cfg.betas) {
    sweep.push_back(isofrequency_scan(cfg.geometry, b, co));
    const IsoContour& c = sweep.back();
    for (size_t l = 0; l < c.polylines.size(); ++l)
      for (size_t v = 0; v < c.polylines[l].size(); ++v)
        f << row({f17(b), i2s(long(l)), i2s(long(v)), f17(c.polylines[l][v][0]), f17(c.polylines[l][v][1])})
          << "\n";
    per_beta.push_back({{"beta", b}, {"polylines", c.polylines.size()}, {"residual", c.residual}});
  }
  json lines = json::array();
  for (double b : cfg.betas) {
    const LightLineSet s = light_line_projections(cfg.geometry, b);
    json circles = json::array(), ls = json::array();
    for (const auto& c : s.circles) circles.push_back({{"n", c.n}, {"m", c.m}, {"cx", c.cx}, {"cy", c.cy}, {"r", c.r}});
    for (const auto& l : s.lines) {
      json j = {{"pair", {l.n1, l.m1, l.n2, l.m2}}, {"a", l.a}, {"b", l.b}, {"c", l.c}};
      if (l.segment) j["segment"] = *l.segment;
      else j["segment"] = nullptr;
      ls.push_back(j);
    }
    lines.push_back({{"beta", b}, {"circles", circles}, {"lines", ls}});
  }
  w.json_file("light_lines.json", {{"light_lines", lines}});
  json feats = json::array();
  for (const Feature& ft : stationary_features(cfg.geometry, sweep))
    feats.push_back({{"kind", ft.kind}, {"point", ft.point}, {"beta", ft.beta}, {"kx", ft.kx}, {"ky", ft.ky},
                     {"metric", ft.metric}});
  w.json_file("features.json", {{"contours", per_beta}, {"features", feats}});
  return 0;
}

int cmd_stack(const RunConfig& cfg, Writer& w) {
  StackProblem p;
  p.M = cfg.stack_m;
  p.geometry = cfg.geometry;
  p.kappa_y = cfg.kappa_y;
  p.psi = cfg.wave.psi;
  p.beta0 = cfg.beta_start;
  p.beta1 = cfg.beta_stop;
  p.step = cfg.beta_step;
  const StackModes m = stack_modes(p);
  auto f = w.csv("stack_profile.csv", "beta,sigma_min,det_re,det_im,abs_det,wood");
  for (const auto& s : m.profile)
    f << row({f17(s.beta), f17(s.sigma_min), f17(s.det.real()), f17(s.det.imag()), f17(std::abs(s.det)),
              s.wood ? "1" : "0"})
      << "\n";
  w.json_file("stack_modes.json", {{"roots", m.roots},
                                    {"det_maxima", m.det_maxima},
                                    {"det_minima", m.det_minima},
                                    {"kappa_y_rule", m.kappa_y_rule}});
  return 0;
}

int cmd_orders(const RunConfig& cfg, Writer& w) {
  const auto orders = spectral_orders(cfg.wave, cfg.geometry.s, cfg.orders);
  auto f = w.csv("orders.csv", "p,cos_phi,phi_re,phi_im,propagating");
  for (const auto& o : orders)
    f << row({i2s(o.p), f17(o.cos_phi), f17(o.phi.real()), f17(o.phi.imag()), o.propagating ? "1" : "0"}) << "\n";
  const Resonance r = resonance_check(cfg.wave, cfg.geometry.s);
  w.json_file("orders.json", {{"shadow_boundaries", shadow_boundaries(cfg.wave, cfg.geometry.s)},
                              {"resonance", {{"kind", resonance_name(r.kind)}, {"p", r.p}}}});
  return 0;
}

int cmd_kernel_check(const RunConfig& cfg, Writer& w) {
  const KernelSpec spec = spec_of(cfg, cfg.delta);
  const Forcing fo = forcing_for(spec, cfg.wave);
  const FactorizedKernel fk = factorize(spec, fact_of(cfg), fo.pole);
  constexpr int n = 256;
  double worst = 0.0;
  auto f = w.csv("kernel_check.csv", "theta,K_re,K_im,KpKm_re,KpKm_im,rel_err");
  for (int j = 0; j < n; ++j) {
    const double th = 2.0 * pi * (j + 0.5) / n;
    const cplx z = std::polar(1.0, th);
    const cplx k = fk.kernel(z), kk = fk.k_plus(z) * fk.k_minus(z);
    const double e = std::abs(kk - k) / std::abs(k);
    worst = std::max(worst, e);
    f << row({f17(th), f17(k.real()), f17(k.imag()), f17(kk.real()), f17(kk.imag()), f17(e)}) << "\n";
  }
  w.json_file("kernel_check.json",
              {{"winding_number", fk.winding_number()}, {"nodes", fk.nodes()}, {"max_product_error", worst}});
  return 0;
}

}  // namespace

std::string error_record(ErrorCode code, const std::string& message) {
  json j = {{"error", {{"code", error_code_name(code)}, {"message", message}}}};
  return j.dump();
}

RunResult run(const RunConfig& cfg, std::ostream& err) {
  RunResult res;
  try {
    cfg.validate();
  } catch (const Error& e) {
    err << error_record(e.code(), e.what()) << "\n";
    res.status = 1;
    return res;
  }
  try {
    Writer w(cfg, res);
    switch (cfg.command) {
      case Command::coeffs: res.status = cmd_coeffs(cfg, w); break;
      case Command::field: res.status = cmd_field(cfg, w); break;
      case Command::energy: res.status = cmd_energy(cfg, w); break;
      case Command::contours: res.status = cmd_contours(cfg, w); break;
      case Command::stack_modes: res.status = cmd_stack(cfg, w); break;
      case Command::orders: res.status = cmd_orders(cfg, w); break;
      case Command::kernel_check: res.status = cmd_kernel_check(cfg, w); break;
    }
    if (res.status == 3)
      err << error_record(ErrorCode::ill_conditioned, "Foldy system condition estimate above threshold") << "\n";
  } catch (const Error& e) {
    err << error_record(e.code(), e.what()) << "\n";
    res.status = e.code() == ErrorCode::invalid_config ? 1 : 2;
  } catch (const std::exception& e) {
    err << error_record(ErrorCode::domain, e.what()) << "\n";
    res.status = 2;
  }
  return res;
}

}  // namespace plate
