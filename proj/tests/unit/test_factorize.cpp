#include <cmath>

#include "doctest.h"
#include "plate/factorize.hpp"
#include "plate/wienerhopf.hpp"

using namespace plate;

namespace {

KernelSpec grating(double beta, double delta) {
  KernelSpec k;
  k.geometry.s = 1.0;
  k.beta = beta;
  k.delta_beta = delta;
  return k;
}

double product_error(const FactorizedKernel& fk, int n) {
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const cplx z = std::polar(1.0, 2.0 * pi * (j + 0.5) / n);
    const cplx k = fk.kernel(z);
    worst = std::max(worst, std::abs(fk.k_plus(z) * fk.k_minus(z) - k) / std::abs(k));
  }
  return worst;
}

}  // namespace

TEST_CASE("factorize: product identity on the unit circle") {
  const IncidentWave wave{4.0, pi / 4};
  const KernelSpec spec = grating(4.0, 0.0025);
  const cplx pole = forcing_for(spec, wave).pole;
  FactorizationConfig cfg;
  const FactorizedKernel fk = factorize(spec, cfg, pole);
  CHECK(fk.winding_number() == 0);
  CHECK(product_error(fk, 256) <= 1e-3);
  cfg.n_intervals = 4800;
  CHECK(product_error(factorize(spec, cfg, pole), 256) <= 1e-4);
}

TEST_CASE("factorize: K+ is analytic inside, K- outside, both tend to finite limits") {
  const KernelSpec spec = grating(3.1, 0.0025);
  const FactorizedKernel fk = factorize(spec, {});
  // mean value property of log K+ on a circle inside the disc
  const auto ring = fk.log_k_plus_on_circle(0.5, 64);
  cplx mean = 0.0;
  for (const cplx& v : ring) mean += v;
  mean /= double(ring.size());
  CHECK(std::abs(mean - fk.log_k_plus(0.0)) <= 1e-10 * (1.0 + std::abs(mean)));
  CHECK(std::isfinite(std::abs(fk.k_minus(1e6))));
}

TEST_CASE("factorize: circle-radius and warped modes agree") {
  const KernelSpec spec = grating(3.3, 0.0025);
  FactorizationConfig a, b;
  b.mode = FactorizationMode::circle_radius;
  const FactorizedKernel fa = factorize(spec, a), fb = factorize(spec, b);
  for (double th : {0.0, 0.9, 2.1, 3.0, -1.7}) {
    const cplx z = std::polar(0.6, th);
    CAPTURE(th);
    CHECK(std::abs(fa.k_plus(z) / fb.k_plus(z) - 1.0) <= 1e-4);
    CHECK(std::abs(fa.k_minus(1.0 / z) / fb.k_minus(1.0 / z) - 1.0) <= 1e-4);
  }
}

TEST_CASE("factorize: angle warp is a monotone bijection of the circle") {
  // three nearby centres once stalled the inverse map
  const AngleWarp w3({{-2.283185, 0.02}, {2.283185, 0.02}, {-2.83, 0.014}});
  double worst = 0.0, prev3 = -10.0;
  for (int j = 0; j < 9600; ++j) {
    const double u = 2.0 * pi * j / 9600, th = w3.theta(u);
    worst = std::max(worst, std::abs(w3.u(th) - u));
    CHECK(th > prev3);
    prev3 = th;
  }
  CHECK(worst <= 1e-12);
  const AngleWarp w({{0.3, 1e-3}, {4.0, 5e-3}});
  CHECK(w.u(0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(w.u(2.0 * pi) == doctest::Approx(2.0 * pi).epsilon(1e-12));
  double prev = -1.0;
  for (int i = 0; i <= 200; ++i) {
    const double th = 2.0 * pi * i / 200;
    const double u = w.u(th);
    CHECK(u > prev);
    prev = u;
    CHECK(w.du(th) > 0.0);
    CHECK(w.theta(u) == doctest::Approx(th).epsilon(1e-10));
  }
}

TEST_CASE("factorize: lattice kernel zeros near the circle are zeros") {
  KernelSpec spec;
  spec.mode = KernelMode::half_plane_lattice;
  spec.geometry.dx = 1.0;
  spec.geometry.dy = std::sqrt(2.0);
  spec.beta = 3.11;
  spec.delta_beta = 0.0025;
  const auto zeros = kernel_zeros_near_circle(spec, 0.5);
  REQUIRE(!zeros.empty());
  const double scale = std::abs(kernel_spectral(spec, std::polar(1.0, 1.0)));
  for (const cplx& z : zeros) {
    CHECK(std::abs(z) <= 1.0);
    CHECK(std::abs(kernel_spectral(spec, z)) <= 1e-8 * scale);
  }
}

TEST_CASE("factorize: invalid configuration") {
  const KernelSpec spec = grating(3.1, 0.0025);
  FactorizationConfig cfg;
  cfg.n_intervals = 100;
  CHECK_THROWS_AS(factorize(spec, cfg), Error);
  cfg = {};
  cfg.delta = -1.0;
  try {
    cfg.validate();
    FAIL("expected invalid_config");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_config);
  }
}
