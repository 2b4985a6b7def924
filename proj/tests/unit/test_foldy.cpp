#include <cmath>

#include "doctest.h"
#include "plate/dispersion.hpp"
#include "plate/foldy.hpp"
#include "plate/greens.hpp"

using namespace plate;

namespace {

KernelSpec grating(double beta, double delta = 0.0) {
  KernelSpec k;
  k.geometry.s = 1.0;
  k.beta = beta;
  k.delta_beta = delta;
  return k;
}

}  // namespace

TEST_CASE("foldy: single pin") {
  const double beta = 3.1;
  const auto sol = foldy_solve({grating(beta), 1}, {beta, 0.0});
  REQUIRE(sol.coeffs.A.size() == 1);
  CHECK(std::abs(sol.coeffs.A[0] - 8.0 * beta * beta * I) <= 1e-12 * 8.0 * beta * beta);
}

TEST_CASE("foldy: two pins against the closed form") {
  const double beta = 3.3, psi = 0.4;
  const KernelSpec spec = grating(beta);
  const auto sol = foldy_solve({spec, 2}, {beta, psi});
  const cplx g0 = greens::green_free(beta, 0.0), g1 = greens::green_free(beta, 1.0);
  const cplx t = std::exp(I * beta * std::cos(psi));
  const cplx det = g0 * g0 - g1 * g1;
  const cplx a0 = (-g0 + g1 * t) / det, a1 = (g1 - g0 * t) / det;
  CHECK(std::abs(sol.coeffs.A[0] - a0) <= 1e-12 * std::abs(a0));
  CHECK(std::abs(sol.coeffs.A[1] - a1) <= 1e-12 * std::abs(a1));
}

TEST_CASE("foldy: pin residuals and field decomposition") {
  const IncidentWave w{3.1, 0.0};
  const ScattererSet set{grating(3.1), 300};
  const auto sol = foldy_solve(set, w);
  CHECK(sol.residual <= 1e-8);
  CHECK_FALSE(sol.ill_conditioned);
  const FieldMap pins = foldy_field(set, w, sol.coeffs.A, {0.0, 29.0, 0.0, 0.0, 30, 1});
  for (int i = 0; i < 30; ++i) CHECK(std::abs(pins.total[i]) <= 1e-8);
  const FieldMap m = foldy_field(set, w, sol.coeffs.A, {-3.3, 7.7, -2.1, 2.4, 23, 11});
  for (size_t i = 0; i < m.total.size(); ++i)
    CHECK(std::abs(m.total[i] - m.incident[i] - m.scattered[i]) <= 1e-13 * (1.0 + std::abs(m.total[i])));
}

TEST_CASE("foldy: system matrix is symmetric Toeplitz, so the solution is reciprocal") {
  // Reversing the incident phase sequence (t^m -> t^{n-1-m}) reverses the solution.
  const double beta = 3.4;
  const KernelSpec spec = grating(beta);
  const int n = 40;
  const auto fwd = foldy_solve({spec, n}, {beta, 0.7}).coeffs.A;
  const auto bwd = foldy_solve({spec, n}, {beta, pi - 0.7}).coeffs.A;
  const cplx t = std::exp(I * beta * std::cos(0.7));
  const cplx scale = std::pow(t, n - 1);
  for (int k = 0; k < n; ++k) CHECK(std::abs(fwd[k] - scale * bwd[n - 1 - k]) <= 1e-9 * std::abs(fwd[k]));
}

TEST_CASE("foldy: lattice column sweep matches the direct column sum") {
  LatticeGeometry g;
  g.dx = 1.0;
  g.dy = std::sqrt(2.0);
  const IncidentWave w{3.3, 0.2};
  const KernelSpec spec = kernel_spec_for(KernelMode::half_plane_lattice, g, w, 0.0025);
  const ScattererSet set{spec, 60};
  const auto A = foldy_solve(set, w).coeffs.A;
  const FieldMap m = foldy_field(set, w, A, {-2.35, 8.65, -0.9, 0.8, 12, 5});
  for (int j = 0; j < 5; ++j)
    for (int i = 0; i < 12; ++i) {
      cplx direct = 0.0;
      for (int k = 0; k < 60; ++k)
        direct += A[k] * greens::grating_green_spectral(spec.beta_damped(), m.x[i] - k * g.dx, m.y[j],
                                                        spec.kappa_y, g.dy);
      CHECK(std::abs(m.at(m.scattered, i, j) - direct) <= 1e-9 * (1.0 + std::abs(direct)));
    }
}

TEST_CASE("energy: infinite grating conserves energy") {
  for (double b = 3.0; b <= 4.5; b += 0.0173) {
    const GratingEnergy e = infinite_grating_energy({b, pi / 4}, 1.0);
    CAPTURE(b);
    CHECK(std::abs(e.reflected_total + e.transmitted_total - 1.0) <= 1e-12);
    for (const auto& o : e.orders) {
      CHECK(o.reflected >= 0.0);
      CHECK(o.transmitted >= 0.0);
    }
  }
  CHECK(infinite_grating_energy({3.2, pi / 4}, 1.0).reflected_total >= 0.95);
  CHECK(infinite_grating_energy({3.68, pi / 4}, 1.0).transmitted_total >= 0.95);
  CHECK(infinite_grating_energy({3.68, pi / 4}, 1.0).orders.size() == 1);
  CHECK(infinite_grating_energy({4.5, pi / 4}, 1.0).orders.size() == 2);
}

TEST_CASE("energy: pass-off and invalid angles are rejected") {
  const double pass_off = 2.0 * pi / (1.0 + 1.0 / std::sqrt(2.0));
  try {
    infinite_grating_energy({pass_off, pi / 4}, 1.0);
    FAIL("expected wood_anomaly");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::wood_anomaly);
  }
  CHECK_THROWS_AS(infinite_grating_energy({3.2, 0.0}, 1.0), Error);
}
