#include <cmath>
#include <random>

#include "doctest.h"
#include "plate/simd.hpp"

using namespace plate;

TEST_CASE("simd: backend reports") {
  const std::string b = simd::active_backend();
  CHECK((b == "avx2" || b == "scalar"));
  CHECK((b == "avx2") == simd::avx2_available());
}

TEST_CASE("simd: avx2 order sum matches scalar reference") {
  if (!simd::avx2_available()) return;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const cplx beta(0.5 + 6.0 * u(rng), trial % 3 == 0 ? 0.0 : 0.01 * u(rng));
    const cplx kappa(-3.0 + 6.0 * u(rng), trial % 4 == 0 ? 0.0 : -0.5 + u(rng));
    const double step = 2.0 * pi / (0.5 + 1.5 * u(rng));
    const int P = 1 + int(300 * u(rng));
    const cplx a = simd::scalar::order_sum(beta * beta, kappa, step, -P, P);
    const cplx b = simd::avx2::order_sum(beta * beta, kappa, step, -P, P);
    CAPTURE(trial);
    CHECK(std::abs(a - b) <= 1e-13 * std::abs(a));
  }
}

TEST_CASE("simd: branch choice on the axes") {
  if (!simd::avx2_available()) return;
  // beta^2 - kappa_p^2 exactly negative real, zero imaginary part
  const cplx b2(9.0, 0.0);
  for (int lo : {-7, -3, 0, 2}) {
    const cplx a = simd::scalar::order_sum(b2, 0.0, 1.1, lo, lo + 7);
    const cplx b = simd::avx2::order_sum(b2, 0.0, 1.1, lo, lo + 7);
    CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
  }
  // negative imaginary part of beta^2 - kappa^2 from a complex kappa
  const cplx a = simd::scalar::order_sum(b2, cplx(0.3, 0.2), 1.0, -9, 9);
  const cplx b = simd::avx2::order_sum(b2, cplx(0.3, 0.2), 1.0, -9, 9);
  CHECK(std::abs(a - b) <= 1e-14 * std::abs(a));
}

TEST_CASE("simd: dispatched sum equals the selected backend") {
  const cplx b2(10.24, 0.01);
  const cplx v = simd::order_sum(b2, 0.7, 2 * pi, -50, 50);
  const cplx r = simd::avx2_available() ? simd::avx2::order_sum(b2, 0.7, 2 * pi, -50, 50)
                                        : simd::scalar::order_sum(b2, 0.7, 2 * pi, -50, 50);
  CHECK(v == r);
}
