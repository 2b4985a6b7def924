#include <cmath>

#include "doctest.h"
#include "plate/dispersion.hpp"

using namespace plate;

namespace {

LatticeGeometry rect() {
  LatticeGeometry g;
  g.dx = 1.0;
  g.dy = std::sqrt(2.0);
  return g;
}

const SpectralOrder& order(const std::vector<SpectralOrder>& v, int p) {
  for (const auto& o : v)
    if (o.p == p) return o;
  throw std::runtime_error("missing order");
}

bool has_line(const LightLineSet& s, double a, double b, double c, double tol = 1e-12) {
  for (const auto& l : s.lines)
    if ((std::abs(l.a - a) < tol && std::abs(l.b - b) < tol && std::abs(l.c - c) < tol) ||
        (std::abs(l.a + a) < tol && std::abs(l.b + b) < tol && std::abs(l.c + c) < tol))
      return true;
  return false;
}

}  // namespace

TEST_CASE("orders: oblique incidence on a unit grating") {
  const auto v = spectral_orders({4.0, pi / 4}, 1.0);
  int n = 0;
  for (const auto& o : v) n += o.propagating;
  CHECK(n == 2);
  CHECK(order(v, 0).propagating);
  CHECK(order(v, -1).propagating);
  CHECK(std::abs(order(v, -1).cos_phi - (std::sqrt(2.0) - pi) / 2.0) <= 1e-12);
  CHECK(std::abs(std::cos(order(v, 0).phi.real()) - std::cos(pi / 4)) <= 1e-12);
  CHECK_FALSE(order(v, 1).propagating);
  CHECK(order(v, 1).phi.imag() != 0.0);
  const auto rays = shadow_boundaries({4.0, pi / 4}, 1.0);
  REQUIRE(rays.size() == 2);
  CHECK(std::abs(std::cos(rays[0]) - (std::sqrt(2.0) - pi) / 2.0) <= 1e-12);
  CHECK(std::abs(rays[1] - pi / 4) <= 1e-12);
}

TEST_CASE("orders: pass-off of order -1 and resonances") {
  const double pass_off = 2.0 * pi / (1.0 + 1.0 / std::sqrt(2.0));
  CHECK(pass_off == doctest::Approx(3.6806).epsilon(1e-5));
  Resonance r = resonance_check({pass_off, pi / 4}, 1.0);
  CHECK(r.kind == ResonanceKind::outward);
  CHECK(r.p == -1);
  // the rounded value misses the exact pass-off by ~4e-6
  CHECK(resonance_check({3.6806, pi / 4}, 1.0).kind == ResonanceKind::none);
  CHECK(resonance_check({3.6806, pi / 4}, 1.0, 1e-5).kind == ResonanceKind::outward);
  r = resonance_check({pi, 0.0}, 1.0);
  CHECK(r.kind == ResonanceKind::outward);
  CHECK(r.p == -1);
  r = resonance_check({pi, pi}, 1.0);
  CHECK(r.kind == ResonanceKind::inward);
  CHECK(r.p == 1);
  CHECK(resonance_check({3.1, 0.0}, 1.0).kind == ResonanceKind::none);
}

TEST_CASE("lattice kernel: mirror symmetry in both wavenumbers") {
  const LatticeGeometry g = rect();
  for (double b : {2.5, 3.1, 4.2})
    for (double kx : {0.3, 1.7, 2.9})
      for (double ky : {0.2, 1.1, 2.0}) {
        const double f = lattice_kernel_real(g, b, kx, ky);
        CHECK(lattice_kernel_real(g, b, -kx, ky) == doctest::Approx(f).epsilon(1e-10));
        CHECK(lattice_kernel_real(g, b, kx, -ky) == doctest::Approx(f).epsilon(1e-10));
      }
}

TEST_CASE("contours: vertices lie on the zero set and the set is mirror symmetric") {
  const LatticeGeometry g = rect();
  ContourOptions o;
  o.nx = o.ny = 120;
  const IsoContour c = isofrequency_scan(g, 3.05, o);
  REQUIRE_FALSE(c.empty());
  CHECK(c.residual <= 1e-8);
  const double scale = std::abs(lattice_kernel_real(g, 3.05, 1.0, 1.0));
  int checked = 0;
  for (const auto& line : c.polylines)
    for (size_t i = 0; i < line.size(); i += 7, ++checked) {
      const double kx = line[i][0], ky = line[i][1];
      CHECK(std::abs(kx) <= pi / g.dx + 1e-12);
      CHECK(std::abs(ky) <= pi / g.dy + 1e-12);
      CHECK(std::abs(lattice_kernel_real(g, 3.05, -kx, ky)) <= 1e-6 * scale);
      CHECK(std::abs(lattice_kernel_real(g, 3.05, kx, -ky)) <= 1e-6 * scale);
    }
  CHECK(checked > 10);
}

TEST_CASE("contours: low frequencies lie in the pinned-plate stop band") {
  ContourOptions o;
  o.nx = o.ny = 80;
  for (double b : {0.8, 1.5, 2.0}) CHECK(isofrequency_scan(rect(), b, o).empty());
}

TEST_CASE("light lines: square lattice diagonals") {
  LatticeGeometry g;
  const double w = 3.0 * pi;
  const LightLineSet s = light_line_projections(g, 5.0, 2, std::array<double, 4>{-w, w, -w, w});
  // ||kx| - |ky|| = 2 pi
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(has_line(s, -h, h, std::sqrt(2.0) * pi));
  CHECK(has_line(s, h, h, -std::sqrt(2.0) * pi));
  for (const auto& l : s.lines) {
    CHECK(l.a * l.a + l.b * l.b == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(l.b >= 0.0);
  }
  CHECK_FALSE(s.circles.empty());
}

TEST_CASE("light lines: rectangular lattice limiting lines ky -+ sqrt2 kx = pi/dy") {
  const LatticeGeometry g = rect();
  const double w = 3.0 * pi;
  const LightLineSet s = light_line_projections(g, 5.4, 2, std::array<double, 4>{-w, w, -w, w});
  const double n = std::sqrt(3.0);
  CHECK(has_line(s, -std::sqrt(2.0) / n, 1.0 / n, pi / g.dy / n, 1e-12));
  CHECK(has_line(s, std::sqrt(2.0) / n, 1.0 / n, pi / g.dy / n, 1e-12));
  // every crossing is on both circles of its pair and on the line
  for (const auto& l : s.lines)
    for (const auto& p : l.crossings) CHECK(std::abs(l.a * p[0] + l.b * p[1] - l.c) <= 1e-9);
}

TEST_CASE("light lines: circles that do not meet give no line") {
  const LightLineSet s = light_line_projections(rect(), 1.0, 1);
  CHECK(s.lines.empty());
}

TEST_CASE("stack: determinant is invariant under grating reversal") {
  StackProblem p;
  p.geometry = rect();
  for (int M : {1, 2, 3})
    for (double b : {3.05, 3.12, 3.2}) {
      p.M = M;
      const cplx d = stack_determinant(p, b), r = stack_determinant(p, b, true);
      CHECK(std::abs(d - r) <= 1e-10 * std::abs(d));
      const auto G = stack_matrix(p, b);
      for (size_t i = 0; i < G.size(); ++i)
        for (size_t j = 0; j < G.size(); ++j) CHECK(G[i][j] == G[j][i]);
      CHECK(stack_sigma_min(p, b) > 0.0);
      CHECK(stack_sigma_min(p, b) <= 1.0);
    }
}

TEST_CASE("stack: roots of the five-grating stack") {
  StackProblem p;
  p.geometry = rect();
  p.beta0 = 3.12;
  p.beta1 = 3.16;
  p.step = 1e-3;
  const StackModes m = stack_modes(p);
  bool root = false, peak = false;
  for (double r : m.roots) root |= std::abs(r - 3.151) <= 0.005;
  for (double r : m.det_maxima) peak |= std::abs(r - 3.1375) <= 0.005;
  CHECK(root);
  CHECK(peak);
  CHECK(m.kappa_y_rule == "beta*sin(psi)");
}

TEST_CASE("features: a circle shrinking to X is a Dirac-like candidate") {
  const LatticeGeometry g = rect();
  const double beta_d = 5.0234;
  std::vector<IsoContour> sweep;
  for (int k = 0; k <= 15; ++k) {
    IsoContour c;
    c.beta = 4.95 + 0.01 * k;
    const double r = 5.0 * std::abs(c.beta - beta_d);
    std::vector<Point2> circle;
    for (int j = 0; j <= 64; ++j) {
      const double th = 2.0 * pi * j / 64;
      circle.push_back({pi + r * std::cos(th), r * std::sin(th)});
    }
    c.polylines.push_back(circle);
    sweep.push_back(c);
  }
  int found = 0;
  for (const Feature& f : stationary_features(g, sweep))
    if (f.kind == "dirac") {
      ++found;
      CHECK(f.point == "X");
      CHECK(std::abs(f.beta - beta_d) <= 0.01);
      CHECK(f.kx == doctest::Approx(pi));
      CHECK(f.ky == doctest::Approx(0.0));
    }
  CHECK(found == 1);
}

TEST_CASE("features: inflexion at Gamma on the first surface") {
  std::vector<IsoContour> sweep;
  for (double b : {3.100, 3.105, 3.110}) {
    IsoContour c;
    c.beta = b;
    sweep.push_back(c);
  }
  int found = 0;
  for (const Feature& f : stationary_features(rect(), sweep))
    if (f.kind == "inflexion" && f.point == "Gamma") {
      ++found;
      CHECK(f.beta > 3.107);
      CHECK(f.beta < 3.11);
    }
  CHECK(found == 1);
}

TEST_CASE("features: a vanish and a later appear at X stay separate events") {
  // small loop near X gone after 5.015, new loop from 5.030: three steps apart
  const LatticeGeometry g = rect();
  std::vector<IsoContour> sweep;
  for (int k = 0; k <= 10; ++k) {
    IsoContour c;
    c.beta = 5.0 + 0.005 * k;
    if (k <= 3 || k >= 6) {
      const double r = k <= 3 ? 0.05 * (4 - k) : 0.1 * (k - 5);
      std::vector<Point2> circle;
      for (int j = 0; j <= 32; ++j) {
        const double th = 2.0 * pi * j / 32;
        circle.push_back({pi - 0.1 + r * std::cos(th), r * std::sin(th)});
      }
      c.polylines.push_back(circle);
    }
    sweep.push_back(c);
  }
  std::vector<double> found;
  for (const Feature& f : stationary_features(g, sweep))
    if (f.kind == "dirac" && f.point == "X") found.push_back(f.beta);
  REQUIRE(found.size() == 2);
  CHECK(found[0] == doctest::Approx(5.0175));
  CHECK(found[1] == doctest::Approx(5.0275));
}
