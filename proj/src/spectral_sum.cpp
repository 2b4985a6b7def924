#include <cmath>

#include "plate/greens.hpp"
#include "plate/simd.hpp"

namespace plate::greens {

namespace {

constexpr int max_orders = 20000;

// B_{2j}/(2j)!, j = 1..8
constexpr double bern[] = {
    1.0 / 12.0,           -1.0 / 720.0,          1.0 / 30240.0,         -1.0 / 1209600.0,
    1.0 / 47900160.0,     -691.0 / 1307674368000.0, 1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
};

}  // namespace

cplx hurwitz_zeta(int n, cplx q) {
  cplx acc = 0.0;
  int k = 0;
  while (std::abs(q + double(k)) < 12.0 || (q + double(k)).real() < 6.0) {
    acc += std::pow(q + double(k), -n);
    ++k;
  }
  const cplx w = q + double(k);
  const cplx inv = 1.0 / w;
  cplx wp = std::pow(inv, n);  // w^{-n}
  acc += wp * w / double(n - 1) + 0.5 * wp;
  // n (n+1) ... (n+2j-2) w^{-n-2j+1}
  double rising = n;
  cplx pw = wp * inv;
  for (int j = 0; j < 8; ++j) {
    acc += bern[j] * rising * pw;
    rising *= double(n + 2 * j + 1) * double(n + 2 * j + 2);
    pw *= inv * inv;
  }
  return acc;
}

cplx order_sum_tail(cplx beta, cplx kappa, double s, int P) {
  const double step = 2.0 * pi / s;
  const cplx a = kappa / step;
  const cplx b2 = beta * beta;
  const cplx z3 = hurwitz_zeta(3, double(P + 1) + a) + hurwitz_zeta(3, double(P + 1) - a);
  const cplx z7 = hurwitz_zeta(7, double(P + 1) + a) + hurwitz_zeta(7, double(P + 1) - a);
  return -I * (b2 * z3 / std::pow(step, 3) + 0.625 * b2 * b2 * b2 * z7 / std::pow(step, 7));
}

cplx periodic_bracket_sum(cplx beta, cplx kappa, double d, double along, double across,
                          const SumOptions& opt) {
  if (!(beta.real() > 0.0) || beta.imag() < 0.0)
    throw Error(ErrorCode::domain, "lattice sum: beta must have Re > 0 and Im >= 0");
  if (!(d > 0.0)) throw Error(ErrorCode::domain, "lattice sum: period <= 0");
  if (opt.P < 1) throw Error(ErrorCode::domain, "lattice sum: P < 1");
  const double step = 2.0 * pi / d;
  // relabel orders so that the truncation is centred on the reduced kappa
  const cplx k0 = kappa - std::round(kappa.real() / step) * step;
  if (beta.imag() == 0.0 && k0.imag() == 0.0)
    check_wood(beta.real(), k0.real(), d, opt.wood_guard);
  const cplx b2 = beta * beta;

  if (across == 0.0 && along == 0.0) {
    cplx acc = simd::order_sum(b2, k0, step, -opt.P, opt.P);
    if (opt.tail) acc += order_sum_tail(beta, k0, d, opt.P);
    return (2.0 / d) * acc;
  }

  const double y = std::abs(across);
  int P = opt.P;
  if (y > 0.0) {
    const double need = (std::abs(k0.real()) + std::abs(beta) + 40.0 / y) / step + 1.0;
    P = need < double(max_orders) ? std::max(4, int(need)) : std::max(P, max_orders);
  }
  cplx acc = 0.0;
  for (int p = P; p >= 0; --p) {
    for (int sgn : {1, -1}) {
      if (p == 0 && sgn < 0) continue;
      const cplx kp = k0 + double(sgn * p) * step;
      const cplx k2 = kp * kp;
      const cplx chi = sqrt_upper(b2 - k2);
      const cplx tau = std::sqrt(b2 + k2);
      acc += std::exp(I * kp * along) *
             (std::exp(I * chi * y) / chi + I * std::exp(-tau * y) / tau);
    }
  }
  return (2.0 / d) * acc;
}

}  // namespace plate::greens
