#include "plate/dispersion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "plate/greens.hpp"

namespace plate {

std::vector<SpectralOrder> spectral_orders(const IncidentWave& wave, double s, int P) {
  wave.validate();
  if (!(s > 0.0)) throw Error(ErrorCode::domain, "spectral_orders: s <= 0");
  std::vector<SpectralOrder> out;
  for (int p = -P; p <= P; ++p) {
    SpectralOrder o;
    o.p = p;
    o.cos_phi = std::cos(wave.psi) + 2.0 * pi * p / (s * wave.beta);
    o.propagating = std::abs(o.cos_phi) <= 1.0;
    o.phi = o.propagating ? cplx(std::acos(o.cos_phi)) : std::acos(cplx(o.cos_phi));
    out.push_back(o);
  }
  return out;
}

std::vector<double> shadow_boundaries(const IncidentWave& wave, double s) {
  std::vector<double> rays;
  for (const auto& o : spectral_orders(wave, s))
    if (o.propagating) rays.push_back(o.phi.real());
  return rays;
}

const char* resonance_name(ResonanceKind k) {
  switch (k) {
    case ResonanceKind::inward: return "inward";
    case ResonanceKind::outward: return "outward";
    default: return "none";
  }
}

Resonance resonance_check(const IncidentWave& wave, double s, double tol) {
  for (const auto& o : spectral_orders(wave, s)) {
    if (o.p == 0) continue;
    if (std::abs(o.cos_phi + 1.0) <= tol) return {ResonanceKind::outward, o.p};
    if (std::abs(o.cos_phi - 1.0) <= tol) return {ResonanceKind::inward, o.p};
  }
  return {};
}

namespace {

// Lattice kernel along one kappa_y row: the order data do not depend on kx.
class KernelRow {
 public:
  KernelRow(const LatticeGeometry& g, double beta, double ky, int P) : dx_(g.dx) {
    const double step = 2.0 * pi / g.dy;
    const double k0 = ky - std::round(ky / step) * step;
    greens::check_wood(beta, k0, g.dy, 1e-10);
    const double b2 = beta * beta;
    for (int p = -P; p <= P; ++p) {
      const double kp = k0 + p * step;
      const cplx chi = sqrt_upper(b2 - kp * kp);
      const double tau = std::sqrt(b2 + kp * kp);
      terms_.push_back({std::exp(I * chi * g.dx), std::exp(-tau * g.dx), chi, tau});
    }
    tail_ = greens::order_sum_tail(beta, k0, g.dy, P);
    scale_ = 2.0 / g.dy;
  }
  // 8 beta^2 K / i = (2/dy) sum_p [...]; real for real kx
  double operator()(double kx) const {
    const cplx z = std::polar(1.0, kx * dx_), zi = std::conj(z);
    cplx acc = tail_;
    for (const auto& t : terms_)
      acc += (1.0 - t.q * t.q) / ((1.0 - t.q * z) * (1.0 - t.q * zi)) / t.chi +
             I * (1.0 - t.r * t.r) / ((1.0 - t.r * z) * (1.0 - t.r * zi)) / t.tau;
    // K = (i/8beta^2)(2/dy) acc; 8 beta^2 K = i (2/dy) acc
    return (I * scale_ * acc).real();
  }

 private:
  struct Term {
    cplx q;
    double r;
    cplx chi;
    double tau;
  };
  double dx_;
  std::vector<Term> terms_;
  cplx tail_;
  double scale_;
};

double bisect(const std::function<double(double)>& f, double a, double b, double fa) {
  for (int it = 0; it < 60 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double lattice_kernel_real(const LatticeGeometry& g, double beta, double kx, double ky, int P) {
  return KernelRow(g, beta, ky, P)(kx);
}

IsoContour isofrequency_scan(const LatticeGeometry& g, double beta, const ContourOptions& opt) {
  g.validate();
  if (!(beta > 0.0)) throw Error(ErrorCode::domain, "isofrequency_scan: beta <= 0");
  if (opt.nx < 3 || opt.ny < 3) throw Error(ErrorCode::invalid_config, "isofrequency_scan: grid too small");
  const int nx = opt.nx, ny = opt.ny;
  const double X = pi / g.dx, Y = pi / g.dy;
  std::vector<double> kx(nx), ky(ny);
  for (int i = 0; i < nx; ++i) kx[i] = -X + 2.0 * X * i / (nx - 1);
  for (int j = 0; j < ny; ++j) ky[j] = -Y + 2.0 * Y * j / (ny - 1);

  std::vector<std::optional<KernelRow>> rows(ny);
  std::vector<double> f(size_t(nx) * ny, NAN);
  for (int j = 0; j < ny; ++j) {
    try {
      rows[j].emplace(g, beta, ky[j], opt.orders);
    } catch (const Error&) {
      continue;  // row on a pass-off; left as NaN
    }
    for (int i = 0; i < nx; ++i) f[size_t(j) * nx + i] = (*rows[j])(kx[i]);
  }
  std::vector<double> mags;
  for (double v : f)
    if (std::isfinite(v)) mags.push_back(std::abs(v));
  IsoContour out;
  out.beta = beta;
  if (mags.empty()) return out;
  std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
  const double scale = mags[mags.size() / 2];
  auto F = [&](int i, int j) { return f[size_t(j) * nx + i]; };

  // Edge ids: horizontal (i,j)-(i+1,j) -> 2 (j nx + i); vertical (i,j)-(i,j+1) -> +1.
  std::map<long, Point2> crossing;
  auto edge = [&](int i, int j, bool vertical) -> const Point2* {
    const long id = 2L * (long(j) * nx + i) + (vertical ? 1 : 0);
    auto it = crossing.find(id);
    if (it != crossing.end()) return std::isnan(it->second[0]) ? nullptr : &it->second;
    const int i2 = vertical ? i : i + 1, j2 = vertical ? j + 1 : j;
    const double fa = F(i, j), fb = F(i2, j2);
    Point2 p{NAN, NAN};
    if (std::isfinite(fa) && std::isfinite(fb) && (fa < 0.0) != (fb < 0.0)) {
      double root;
      double val;
      if (vertical) {
        auto h = [&](double y) { return KernelRow(g, beta, y, opt.orders)(kx[i]); };
        try {
          root = bisect(h, ky[j], ky[j2], fa);
          val = h(root);
          p = {kx[i], root};
        } catch (const Error&) {
          val = INFINITY;
        }
      } else {
        const KernelRow& row = *rows[j];
        root = bisect([&](double x) { return row(x); }, kx[i], kx[i2], fa);
        val = row(root);
        p = {root, ky[j]};
      }
      // poles (light lines) also flip the sign; zeros polish to ~0
      if (!(std::abs(val) <= opt.zero_tol * scale)) p = {NAN, NAN};
    }
    auto ins = crossing.emplace(id, p).first;
    return std::isnan(p[0]) ? nullptr : &ins->second;
  };

  // marching squares: segments between crossing points (keyed by edge id)
  std::vector<std::pair<long, long>> segs;
  auto key = [&](int i, int j, bool v) { return 2L * (long(j) * nx + i) + (v ? 1 : 0); };
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      // edges in cyclic order: bottom, right, top, left
      const std::array<std::tuple<int, int, bool>, 4> es{{{i, j, false}, {i + 1, j, true}, {i, j + 1, false}, {i, j, true}}};
      std::vector<long> hit;
      for (const auto& [a, b, v] : es)
        if (edge(a, b, v)) hit.push_back(key(a, b, v));
      if (hit.size() == 2) {
        segs.push_back({hit[0], hit[1]});
      } else if (hit.size() == 4) {
        const double c = 0.25 * (F(i, j) + F(i + 1, j) + F(i, j + 1) + F(i + 1, j + 1));
        // join around the corner whose sign differs from the centre
        if ((c < 0.0) == (F(i, j) < 0.0)) {
          segs.push_back({hit[0], hit[1]});
          segs.push_back({hit[2], hit[3]});
        } else {
          segs.push_back({hit[0], hit[3]});
          segs.push_back({hit[1], hit[2]});
        }
      }
    }
  }

  std::multimap<long, size_t> at;
  for (size_t s = 0; s < segs.size(); ++s) {
    at.emplace(segs[s].first, s);
    at.emplace(segs[s].second, s);
  }
  std::vector<bool> used(segs.size(), false);
  auto next_seg = [&](long node) -> long {
    auto [lo, hi] = at.equal_range(node);
    for (auto it = lo; it != hi; ++it)
      if (!used[it->second]) return long(it->second);
    return -1;
  };
  auto walk = [&](long start, std::vector<long>& nodes) {
    long node = start;
    for (long s; (s = next_seg(node)) >= 0;) {
      used[s] = true;
      node = segs[s].first == node ? segs[s].second : segs[s].first;
      nodes.push_back(node);
    }
  };
  // open chains first (endpoints with one segment), then closed loops
  std::vector<long> starts;
  for (const auto& [node, s] : at)
    if (at.count(node) == 1) starts.push_back(node);
  for (size_t s = 0; s < segs.size(); ++s) starts.push_back(segs[s].first);
  for (long st : starts) {
    if (next_seg(st) < 0) continue;
    std::vector<long> nodes{st};
    walk(st, nodes);
    std::vector<Point2> line;
    for (long n : nodes) line.push_back(crossing.at(n));
    out.polylines.push_back(std::move(line));
  }
  double worst = 0.0;
  for (const auto& line : out.polylines)
    for (const auto& p : line) worst = std::max(worst, std::abs(lattice_kernel_real(g, beta, p[0], p[1], opt.orders)));
  out.residual = worst / scale;
  return out;
}

LightLineSet light_line_projections(const LatticeGeometry& g, double beta, int cap,
                                    std::optional<std::array<double, 4>> window) {
  g.validate();
  const std::array<double, 4> w = window.value_or(std::array<double, 4>{-pi / g.dx, pi / g.dx, -pi / g.dy, pi / g.dy});
  LightLineSet out;
  for (int n = -cap; n <= cap; ++n)
    for (int m = -cap; m <= cap; ++m) out.circles.push_back({n, m, -2.0 * pi * n / g.dx, -2.0 * pi * m / g.dy, beta});
  for (size_t i = 0; i < out.circles.size(); ++i) {
    for (size_t j = i + 1; j < out.circles.size(); ++j) {
      const LightCircle &c1 = out.circles[i], &c2 = out.circles[j];
      const double ex = c2.cx - c1.cx, ey = c2.cy - c1.cy;
      const double d = std::hypot(ex, ey);
      if (d > 2.0 * beta) continue;
      LightLine L{c1.n, c1.m, c2.n, c2.m, ex / d, ey / d, 0.0, {}, std::nullopt};
      // |k - c1| = |k - c2|  <=>  e.k = (|c2|^2 - |c1|^2) / 2, e = c2 - c1
      L.c = 0.5 * ((c2.cx * c2.cx + c2.cy * c2.cy) - (c1.cx * c1.cx + c1.cy * c1.cy)) / d;
      if (L.b < 0.0 || (L.b == 0.0 && L.a < 0.0)) {
        L.a = -L.a;
        L.b = -L.b;
        L.c = -L.c;
      }
      const double mx = 0.5 * (c1.cx + c2.cx), my = 0.5 * (c1.cy + c2.cy);
      const double hh = std::sqrt(std::max(0.0, beta * beta - 0.25 * d * d));
      L.crossings.push_back({mx - hh * ey / d, my + hh * ex / d});
      if (hh > 0.0) L.crossings.push_back({mx + hh * ey / d, my - hh * ex / d});
      // clip a kx + b ky = c to the window (Liang-Barsky on a long segment)
      const double px = L.a * L.c, py = L.b * L.c, tx = -L.b, ty = L.a;
      double t0 = -1e9, t1 = 1e9;
      auto clip = [&](double p, double q) {
        if (p == 0.0) return q >= 0.0;
        const double r = q / p;
        if (p < 0.0) t0 = std::max(t0, r);
        else t1 = std::min(t1, r);
        return true;
      };
      if (clip(-tx, px - w[0]) && clip(tx, w[1] - px) && clip(-ty, py - w[2]) && clip(ty, w[3] - py) && t0 <= t1)
        L.segment = std::array<Point2, 2>{Point2{px + t0 * tx, py + t0 * ty}, Point2{px + t1 * tx, py + t1 * ty}};
      out.lines.push_back(std::move(L));
    }
  }
  return out;
}

namespace {

double stack_kappa_y(const StackProblem& p, double beta) {
  return p.kappa_y.value_or(beta * std::sin(p.psi));
}

Eigen::MatrixXcd stack_eigen(const StackProblem& p, double beta) {
  const int n = 2 * p.M + 1;
  KernelSpec spec;
  spec.mode = KernelMode::half_plane_lattice;
  spec.geometry = p.geometry;
  spec.beta = beta;
  spec.kappa_y = stack_kappa_y(p, beta);
  const std::vector<cplx> c = kernel_coefficients(spec, n - 1);
  Eigen::MatrixXcd G(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) G(i, k) = c[std::abs(i - k)];
  return G;
}

}  // namespace

std::vector<std::vector<cplx>> stack_matrix(const StackProblem& p, double beta) {
  const Eigen::MatrixXcd G = stack_eigen(p, beta);
  std::vector<std::vector<cplx>> out(G.rows(), std::vector<cplx>(G.cols()));
  for (int i = 0; i < G.rows(); ++i)
    for (int k = 0; k < G.cols(); ++k) out[i][k] = G(i, k);
  return out;
}

cplx stack_determinant(const StackProblem& p, double beta, bool reversed) {
  Eigen::MatrixXcd G = stack_eigen(p, beta);
  if (reversed) G = G.colwise().reverse().rowwise().reverse().eval();
  return G.determinant();
}

double stack_sigma_min(const StackProblem& p, double beta) {
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stack_eigen(p, beta));
  const auto& s = svd.singularValues();
  return s(s.size() - 1) / s(0);
}

StackModes stack_modes(const StackProblem& p, double root_threshold) {
  p.geometry.validate();
  if (p.M < 0 || !(p.step > 0.0) || !(p.beta1 > p.beta0))
    throw Error(ErrorCode::invalid_config, "stack_modes: bad problem");
  StackModes out;
  out.kappa_y_rule = p.kappa_y ? "fixed" : "beta*sin(psi)";
  const int n = int(std::floor((p.beta1 - p.beta0) / p.step + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    const double b = p.beta0 + i * p.step;
    StackSample s{b, NAN, NAN, false};
    try {
      const Eigen::MatrixXcd G = stack_eigen(p, b);
      const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(G);
      s.sigma_min = svd.singularValues()(G.rows() - 1) / svd.singularValues()(0);
      s.det = G.determinant();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::wood_anomaly) throw;
      s.wood = true;
    }
    out.profile.push_back(s);
  }
  auto ok = [&](size_t i) { return !out.profile[i].wood; };
  for (size_t i = 1; i + 1 < out.profile.size(); ++i) {
    if (!ok(i - 1) || !ok(i) || !ok(i + 1)) continue;
    const auto &a = out.profile[i - 1], &b = out.profile[i], &c = out.profile[i + 1];
    if (b.sigma_min < a.sigma_min && b.sigma_min <= c.sigma_min && b.sigma_min < root_threshold) {
      // golden-section on sigma_min over [a, c]
      double lo = a.beta, hi = c.beta;
      const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
      double f1 = stack_sigma_min(p, x1), f2 = stack_sigma_min(p, x2);
      while (hi - lo > 1e-7) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - gr * (hi - lo);
          f1 = stack_sigma_min(p, x1);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + gr * (hi - lo);
          f2 = stack_sigma_min(p, x2);
        }
      }
      out.roots.push_back(0.5 * (lo + hi));
    }
    const double da = std::abs(a.det), db = std::abs(b.det), dc = std::abs(c.det);
    if (db > da && db >= dc) out.det_maxima.push_back(b.beta);
    if (db < da && db <= dc) out.det_minima.push_back(b.beta);
  }
  return out;
}

}  // namespace plate

namespace plate {

namespace {

struct SymPoint {
  const char* name;
  double kx, ky;
};

std::vector<SymPoint> symmetry_points(const LatticeGeometry& g) {
  return {{"Gamma", 0.0, 0.0}, {"X", pi / g.dx, 0.0}, {"Y", 0.0, pi / g.dy}, {"M", pi / g.dx, pi / g.dy}};
}

struct Local {
  double length = 0.0;
  double dmin = std::numeric_limits<double>::infinity();
};

// contour length within radius r of P and distance to the nearest vertex,
// both measured modulo the reciprocal lattice
Local local_geometry(const LatticeGeometry& g, const IsoContour& c, const SymPoint& P, double r) {
  auto dist = [&](const Point2& q) {
    const double ex = std::remainder(q[0] - P.kx, 2.0 * pi / g.dx);
    const double ey = std::remainder(q[1] - P.ky, 2.0 * pi / g.dy);
    return std::hypot(ex, ey);
  };
  Local out;
  for (const auto& line : c.polylines)
    for (size_t i = 0; i < line.size(); ++i) {
      const double d = dist(line[i]);
      out.dmin = std::min(out.dmin, d);
      if (i > 0 && d <= r && dist(line[i - 1]) <= r)
        out.length += std::hypot(line[i][0] - line[i - 1][0], line[i][1] - line[i - 1][1]);
    }
  return out;
}

struct Candidate {
  Feature f;
  size_t lo, hi;  // bracketing sweep indices
  bool edge;      // contour vanishes or appears between lo and hi
  bool vanish;    // edge direction: present at lo, absent at hi
};

std::vector<Candidate> detect(const LatticeGeometry& g, const std::vector<IsoContour>& sweep,
                              const FeatureOptions& opt) {
  std::vector<Candidate> out;
  const size_t n = sweep.size();
  if (n < 2) return out;
  const double r = opt.neighbourhood * pi / g.dx;

  for (const SymPoint& P : symmetry_points(g)) {
    // inflexions: a contour passes through P between consecutive betas
    for (size_t k = 0; k + 1 < n; ++k) {
      const double b0 = sweep[k].beta, b1 = sweep[k + 1].beta;
      double f0, f1, root, val;
      auto f = [&](double b) { return lattice_kernel_real(g, b, P.kx, P.ky); };
      try {
        f0 = f(b0);
        f1 = f(b1);
        if ((f0 < 0.0) == (f1 < 0.0)) continue;
        root = bisect(f, b0, b1, f0);
        val = f(root);
      } catch (const Error&) {
        continue;
      }
      if (std::abs(val) > 1e-6 * std::min(std::abs(f0), std::abs(f1))) continue;  // pole
      out.push_back({{"inflexion", P.name, root, P.kx, P.ky, 0.0}, k, k + 1, false, false});
    }

    // Dirac-like: the contour near P shrinks away
    std::vector<Local> loc(n);
    for (size_t k = 0; k < n; ++k) loc[k] = local_geometry(g, sweep[k], P, r);
    const double thr = opt.collapse * r;
    std::vector<Candidate> mine;
    auto add = [&](size_t lo, size_t hi, double metric, bool edge, bool vanish) {
      const double beta = lo == hi ? sweep[lo].beta : 0.5 * (sweep[lo].beta + sweep[hi].beta);
      mine.push_back({{"dirac", P.name, beta, P.kx, P.ky, metric}, lo, hi, edge, vanish});
    };
    for (size_t k = 0; k < n; ++k) {
      const double L = loc[k].length;
      if (L == 0.0) {
        // contour left the neighbourhood while close to P, or entered it there
        if (k > 0 && loc[k - 1].length > 0.0 && loc[k - 1].dmin < 0.5 * r) add(k - 1, k, 0.0, true, true);
        if (k + 1 < n && loc[k + 1].length > 0.0 && loc[k + 1].dmin < 0.5 * r) add(k, k + 1, 0.0, true, false);
      } else if (k > 0 && k + 1 < n && L < thr && L < loc[k - 1].length && L <= loc[k + 1].length &&
                 loc[k + 1].length > 0.0) {
        add(k, k, L, false, false);
      }
    }
    // merge candidates closer than three sweep steps, preferring edges then small arc length;
    // a vanish and a later appear are separate events and stay apart
    std::sort(mine.begin(), mine.end(), [](const Candidate& a, const Candidate& b) { return a.lo < b.lo; });
    std::vector<Candidate> merged;
    for (const Candidate& c : mine) {
      const bool opposite = !merged.empty() && c.edge && merged.back().edge && c.vanish != merged.back().vanish;
      if (!merged.empty() && c.lo <= merged.back().hi + 3 && !opposite) {
        Candidate& m = merged.back();
        const bool better = (c.edge && !m.edge) || (c.edge == m.edge && c.f.metric < m.f.metric);
        if (better) m = c;
        continue;
      }
      merged.push_back(c);
    }
    out.insert(out.end(), merged.begin(), merged.end());
  }
  std::sort(out.begin(), out.end(), [](const Candidate& x, const Candidate& y) { return x.f.beta < y.f.beta; });
  return out;
}

}  // namespace

std::vector<Feature> stationary_features(const LatticeGeometry& g, const std::vector<IsoContour>& sweep,
                                         const FeatureOptions& opt) {
  std::vector<Feature> out;
  for (const Candidate& c : detect(g, sweep, opt)) out.push_back(c.f);
  return out;
}

std::vector<Feature> stationary_features_refined(const LatticeGeometry& g, const std::vector<double>& betas,
                                                 const ContourOptions& copt, const FeatureOptions& opt,
                                                 int refine_steps) {
  std::vector<IsoContour> sweep;
  sweep.reserve(betas.size());
  for (double b : betas) sweep.push_back(isofrequency_scan(g, b, copt));
  const double r = opt.neighbourhood * pi / g.dx;
  std::vector<Feature> out;
  for (Candidate& c : detect(g, sweep, opt)) {
    if (c.edge) {
      // bisect on presence of contour near the point
      const SymPoint P{"", c.f.kx, c.f.ky};
      double lo = sweep[c.lo].beta, hi = sweep[c.hi].beta;
      const bool lo_present = local_geometry(g, sweep[c.lo], P, r).length > 0.0;
      for (int it = 0; it < refine_steps; ++it) {
        const double mid = 0.5 * (lo + hi);
        const bool present = local_geometry(g, isofrequency_scan(g, mid, copt), P, r).length > 0.0;
        (present == lo_present ? lo : hi) = mid;
      }
      c.f.beta = 0.5 * (lo + hi);
    }
    out.push_back(c.f);
  }
  std::sort(out.begin(), out.end(), [](const Feature& x, const Feature& y) { return x.beta < y.beta; });
  return out;
}

}  // namespace plate
