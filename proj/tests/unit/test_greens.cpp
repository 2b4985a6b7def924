#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles/specfun_values.hpp"
#include "plate/greens.hpp"
#include "plate/specfun.hpp"

using namespace plate;
using namespace plate::greens;

namespace {

// Damped direct column sum at two dampings, extrapolated linearly to delta = 0.
cplx richardson_direct(double beta, double x, double y, double kappa, double d, double delta) {
  auto run = [&](double dl) {
    const int N = int(40.0 / (dl * d)) + 10;
    return grating_green_direct(cplx(beta, dl), x, y, kappa, d, N);
  };
  return 2.0 * run(0.5 * delta) - run(delta);
}

}  // namespace

TEST_CASE("greens: free-space values") {
  CHECK(std::abs(green_free(2.0, 0.0) - I / 32.0) == 0.0);
  const cplx far = green_free(1.0, 40.0);
  CHECK(std::abs(far - I / 8.0 * specfun::hankel1_0(40.0)) <= 1e-10);
  // beta = 2, rho = 1 from the frozen oracle row at argument 2
  for (const auto& r : oracle::specfun_rows) {
    if (r.re != 2.0 || r.im != 0.0) continue;
    const cplx want = I / 32.0 * (r.h0 + 2.0 * I / pi * r.k0);
    CHECK(std::abs(green_free(2.0, 1.0) - want) <= 1e-12);
  }
}

TEST_CASE("greens: source continuity and radial symmetry") {
  const double beta = 3.0;
  CHECK(std::abs(green_free(beta, 1e-4 / beta) - I / (8 * beta * beta)) <= 1e-6);
  const double r = 0.37;
  const cplx g = green_free(beta, std::hypot(r * std::cos(0.3), r * std::sin(0.3)));
  const cplx h = green_free(beta, std::hypot(r * std::cos(2.1), r * std::sin(2.1)));
  CHECK(std::abs(g - h) <= 1e-15);
}

TEST_CASE("greens: grating self term and phase periodicity") {
  CHECK(std::abs(grating_green(3.0, 0.0, 1.1, 1.4, 0, 0.0) - I / 72.0) == 0.0);
  const double d = std::sqrt(2.0);
  const cplx a = grating_green(4.0, 0.0, 0.76, d, 500, 0.01);
  const cplx b = grating_green(4.0, 0.0, 0.76 + 2 * pi / d, d, 500, 0.01);
  CHECK(std::abs(a - b) <= 1e-12);
}

TEST_CASE("greens: undamped truncation guard") {
  CHECK_THROWS_AS(grating_green(3.0, 0.5, 0.0, 1.0, 100, 0.0, 1e-4), Error);
  CHECK_NOTHROW(grating_green(3.0, 0.5, 0.0, 1.0, 100, 0.0, 1.0));
}

TEST_CASE("greens: column sum against accelerated sum, same damping") {
  const double d = std::sqrt(2.0);
  const cplx bd(4.0, 0.01);
  const cplx g = grating_green(4.0, 0.0, 0.76, d, 4000, 0.01);
  const cplx acc = I / (8.0 * bd * bd) * lattice_sum_accelerated(bd, 0.76, d, 200);
  CHECK(std::abs(g - acc) <= 1e-4 * std::abs(acc));
  SumOptions o;
  const cplx tail = grating_green_spectral(bd, 0.0, 0.0, 0.76, d, o);
  CHECK(std::abs(g - tail) <= 1e-12);
}

TEST_CASE("greens: damping bias is first order in delta") {
  const double d = std::sqrt(2.0);
  const cplx ref = lattice_sum_accelerated(4.0, 0.76, d, 400);
  SumOptions o;
  o.P = 400;
  o.tail = false;
  double prev = 0.0;
  for (double dl : {1e-2, 1e-3, 1e-4}) {
    const double bias = std::abs(periodic_bracket_sum(cplx(4.0, dl), 0.76, d, 0, 0, o) - ref);
    if (prev > 0.0) CHECK(prev / bias == doctest::Approx(10.0).epsilon(0.1));
    prev = bias;
  }
}

TEST_CASE("greens: on-axis sum at the Wood anomaly kappa = beta") {
  CHECK_THROWS_AS(lattice_sum_accelerated(3.1, 3.1, 1.0, 200), Error);
  try {
    lattice_sum_accelerated(3.1, 3.1, 1.0, 200);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::wood_anomaly);
  }
  // damped: accelerated vs direct N = 1e5
  const cplx bd(3.1, 0.005);
  const cplx acc = lattice_sum_accelerated(bd, 3.1, 1.0, 200);
  const cplx dir = grating_green(3.1, 0.0, 3.1, 1.0, 100000, 0.005) * 8.0 * bd * bd / I;
  CHECK(std::abs(acc - dir) <= 1e-4);
}

TEST_CASE("greens: accelerated sum vs extrapolated direct sums on a grid") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ub(1.0, 6.0), uk(-3.1, 3.1);
  int done = 0;
  while (done < 20) {
    const double beta = ub(rng), kappa = uk(rng);
    // stay clear of passing-off orders, where the damping bias is not linear
    bool near = false;
    for (const auto& t : grating_sum_terms(beta, kappa, 1.0, 3))
      near = near || std::abs(beta - std::abs(t.kappa_p)) < 0.25;
    if (near) continue;
    CAPTURE(beta);
    CAPTURE(kappa);
    const cplx acc = lattice_sum_accelerated(beta, kappa, 1.0, 2000);
    const cplx dir = richardson_direct(beta, 0.0, 0.0, kappa, 1.0, 2e-3) * 8.0 * beta * beta / I;
    CHECK(std::abs(acc - dir) <= 1e-4 * std::max(1.0, std::abs(acc)));
    ++done;
  }
}

TEST_CASE("greens: truncation order of the accelerated sum") {
  // Summands decay like |kappa_p|^-3, so the truncated sum converges as P^-2:
  // successive deltas under P doubling shrink by a factor 4.
  const double beta = 4.0, kappa = 0.76, s = std::sqrt(2.0);
  const cplx s1 = lattice_sum_accelerated(beta, kappa, s, 100);
  const cplx s2 = lattice_sum_accelerated(beta, kappa, s, 200);
  const cplx s3 = lattice_sum_accelerated(beta, kappa, s, 400);
  CHECK(std::abs(s2 - s1) / std::abs(s3 - s2) == doctest::Approx(4.0).epsilon(0.05));
  SumOptions o;
  o.P = 100;
  const cplx t1 = periodic_bracket_sum(beta, kappa, s, 0, 0, o);
  o.P = 400;
  const cplx t2 = periodic_bracket_sum(beta, kappa, s, 0, 0, o);
  CHECK(std::abs(t1 - t2) <= 1e-13);
}

TEST_CASE("greens: Hurwitz zeta") {
  // zeta(3, 1) = Apery's constant; zeta(n, q) - zeta(n, q + 1) = q^-n
  CHECK(std::abs(hurwitz_zeta(3, 1.0) - 1.2020569031595942854) <= 1e-15);
  const cplx q(3.3, 0.7);
  CHECK(std::abs(hurwitz_zeta(7, q) - hurwitz_zeta(7, q + 1.0) - std::pow(q, -7)) <= 1e-16);
}

TEST_CASE("greens: Rayleigh form vs direct sums") {
  const double k = 3.2 * std::cos(pi / 4);
  const cplx bd(3.2, 0.002);
  const cplx r = rayleigh_field(bd, k, 1.0, 0.3, 0.7, 200);
  CHECK(std::abs(r - grating_green_direct(bd, 0.7, 0.3, k, 1.0, 40000)) <= 1e-6);
  const cplx r0 = rayleigh_field(3.2, k, 1.0, 0.3, 0.7, 200);
  CHECK(std::abs(r0 - richardson_direct(3.2, 0.7, 0.3, k, 1.0, 1e-3)) <= 1e-6);
  CHECK(std::abs(r0 - rayleigh_field(3.2, k, 1.0, 0.3, -0.7, 200)) == 0.0);
  CHECK_THROWS_AS(rayleigh_field(3.2, k, 1.0, 0.3, 0.0, 200), Error);
}

TEST_CASE("greens: far field keeps only propagating orders") {
  const double beta = 3.2, k = beta * std::cos(pi / 4), s = 1.0, y = 12.0;
  const cplx full = rayleigh_field(beta, k, s, 0.2, y, 200);
  cplx prop = 0.0;
  for (const auto& t : grating_sum_terms(beta, k, s, 5))
    if (t.propagating)
      prop += std::exp(I * (t.kappa_p * 0.2 + t.chi_p * y)) / t.chi_p;
  prop *= I / (8 * beta * beta) * (2.0 / s);
  CHECK(std::abs(full - prop) <= 1e-12);
}

TEST_CASE("greens: propagating order counts") {
  CHECK(propagating_order_count(4.0, 4.0 * std::cos(pi / 4), 1.0) == 2);
  CHECK(propagating_order_count(3.5, 3.5 * std::cos(pi / 4), 1.0) == 1);
  for (const auto& t : grating_sum_terms(4.0, 0.3, 1.0, 6)) {
    CHECK(t.propagating == (t.chi_p.imag() == 0.0));
    if (!t.propagating) CHECK(t.chi_p.real() == 0.0);
    CHECK(t.tau_p > 4.0 - 1e-15);
  }
}
