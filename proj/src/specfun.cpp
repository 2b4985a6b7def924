#include "plate/specfun.hpp"

#include <cmath>

namespace plate::specfun {

namespace {

constexpr double euler_gamma = 0.57721566490153286061;
constexpr double eps = 1e-17;

// Trapezoid nodes for the Laplace-type integrals. The integrands are even in v
// and their nearest singularities sit at |Im v| >= 2 for |z| >= 4.
constexpr double quad_h = 0.25;
constexpr int quad_n = 27;

void check_hankel_domain(cplx z) {
  if (z == cplx(0.0)) throw Error(ErrorCode::domain, "hankel1_0: argument is zero");
  if (z.imag() < 0.0) throw Error(ErrorCode::domain, "hankel1_0: Im(argument) < 0");
}

void check_k_domain(cplx z) {
  if (!(z.real() > 0.0)) throw Error(ErrorCode::domain, "bessel_k0: Re(argument) <= 0");
}

// Sum_{k} (-q)^k/(k!)^2 and friends, accumulated together.
struct SeriesParts {
  cplx j0, y0sum, i0, k0sum, j1, y1sum;
};

SeriesParts series_parts(cplx z) {
  const cplx q = 0.25 * z * z;
  SeriesParts s{};
  cplx t = 1.0;       // q^k/(k!)^2
  cplx t1 = 1.0;      // q^k/(k!(k+1)!)
  double hk = 0.0;    // harmonic number H_k
  double sign = 1.0;  // (-1)^k
  s.j0 = 1.0;
  s.i0 = 1.0;
  s.j1 = 1.0;
  // psi(1) + psi(2) = -2 gamma + 1
  s.y1sum = 1.0 - 2.0 * euler_gamma;
  for (int k = 1; k < 200; ++k) {
    t *= q / double(k * k);
    t1 *= q / double(k * (k + 1));
    hk += 1.0 / k;
    sign = -sign;
    s.j0 += sign * t;
    s.i0 += t;
    s.y0sum += -sign * hk * t;
    s.k0sum += hk * t;
    s.j1 += sign * t1;
    const double psis = 2.0 * (hk - euler_gamma) + 1.0 / (k + 1);
    s.y1sum += sign * psis * t1;
    if (std::abs(t) < eps * std::abs(s.i0) && k > 2) break;
  }
  s.j1 *= 0.5 * z;
  s.y1sum *= 0.5 * z;
  return s;
}

// e^x E_p(x) by continued fraction (modified Lentz); Re x > 0 or |x| large.
cplx scaled_expint(int p, cplx x) {
  cplx b = x + double(p);
  cplx c = 1.0 / 1e-300;
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -double(i) * double(p - 1 + i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

// Terminant G_p(x) = Gamma(p) x^(1-p) e^x E_p(x) / (2 pi).
cplx terminant(int p, cplx x) {
  const cplx scale = std::exp(std::lgamma(double(p)) + double(1 - p) * std::log(x));
  return scale * scaled_expint(p, x) / (2.0 * pi);
}

// Hankel expansion sum_k a_k(nu) w^k, w = 1/zeta, nu in {0, 1}. When the
// terms start to grow the series is cut at its smallest term and the
// exponentially small remainder is added through terminants in 2 zeta.
cplx asymptotic_sum(double nu, cplx w) {
  constexpr int keep = 4;
  cplx head[keep];
  cplx sum = 1.0, term = 1.0;
  head[0] = 1.0;
  double prev = 1.0;
  const double mu = 4.0 * nu * nu;
  int k = 1;
  for (; k < 200; ++k) {
    const double a = (mu - double((2 * k - 1) * (2 * k - 1))) / (8.0 * k);
    const cplx next = term * a * w;
    const double m = std::abs(next);
    if (m > prev) break;
    term = next;
    if (k < keep) head[k] = term;
    sum += term;
    prev = m;
    if (m < eps * std::abs(sum)) return sum;
  }
  // k terms (indices 0..k-1) were summed.
  if (k < 2 * keep) return sum;
  const cplx x = 2.0 / w;
  const double c = (k % 2 == 0 ? 2.0 : -2.0) * std::cos(nu * pi);
  cplx r = 0.0;
  for (int j = 0; j < keep; ++j) r += head[j] * terminant(k - j, x);
  return sum + c * r;
}

}  // namespace

namespace detail {

cplx h0_series(cplx z) {
  const SeriesParts s = series_parts(z);
  const cplx l = std::log(0.5 * z) + euler_gamma;
  const cplx y0 = (2.0 / pi) * (l * s.j0 + s.y0sum);
  return s.j0 + I * y0;
}

cplx h1_series(cplx z) {
  const SeriesParts s = series_parts(z);
  const cplx y1 = -2.0 / (pi * z) + (2.0 / pi) * std::log(0.5 * z) * s.j1 - s.y1sum / pi;
  return s.j1 + I * y1;
}

cplx k0_series(cplx z) {
  const SeriesParts s = series_parts(z);
  const cplx l = std::log(0.5 * z) + euler_gamma;
  return -l * s.i0 + s.k0sum;
}

cplx h0_integral(cplx z) {
  cplx acc = 0.0;
  const cplx c = I / (2.0 * z);
  for (int k = quad_n - 1; k >= 0; --k) {
    const double v = k * quad_h;
    const cplx f = std::exp(-v * v) / std::sqrt(1.0 + c * v * v);
    acc += (k == 0 ? 0.5 : 1.0) * f;
  }
  acc *= quad_h * 2.0 / std::sqrt(pi);
  return std::sqrt(2.0 / (pi * z)) * std::exp(I * (z - 0.25 * pi)) * acc;
}

cplx h1_integral(cplx z) {
  cplx acc = 0.0;
  const cplx c = I / (2.0 * z);
  for (int k = quad_n - 1; k >= 1; --k) {
    const double v = k * quad_h;
    acc += v * v * std::exp(-v * v) * std::sqrt(1.0 + c * v * v);
  }
  acc *= quad_h * 4.0 / std::sqrt(pi);
  return std::sqrt(2.0 / (pi * z)) * std::exp(I * (z - 0.75 * pi)) * acc;
}

cplx k0_integral(cplx z) {
  cplx acc = 0.0;
  const cplx c = 1.0 / (2.0 * z);
  for (int k = quad_n - 1; k >= 0; --k) {
    const double v = k * quad_h;
    const cplx f = std::exp(-v * v) / std::sqrt(1.0 + c * v * v);
    acc += (k == 0 ? 0.5 : 1.0) * f;
  }
  acc *= quad_h * 2.0 / std::sqrt(pi);
  return std::sqrt(pi / (2.0 * z)) * std::exp(-z) * acc;
}

cplx h0_asymptotic(cplx z) {
  const cplx s = asymptotic_sum(0.0, I / z);
  return std::sqrt(2.0 / (pi * z)) * std::exp(I * (z - 0.25 * pi)) * s;
}

cplx h1_asymptotic(cplx z) {
  const cplx s = asymptotic_sum(1.0, I / z);
  return std::sqrt(2.0 / (pi * z)) * std::exp(I * (z - 0.75 * pi)) * s;
}

cplx k0_asymptotic(cplx z) {
  const cplx s = asymptotic_sum(0.0, 1.0 / z);
  return std::sqrt(pi / (2.0 * z)) * std::exp(-z) * s;
}

cplx hankel1_1(cplx z) {
  check_hankel_domain(z);
  const double r = std::abs(z);
  if (r <= series_radius) return h1_series(z);
  if (r < asymptotic_radius) return h1_integral(z);
  return h1_asymptotic(z);
}

}  // namespace detail

cplx hankel1_0(cplx z) {
  check_hankel_domain(z);
  const double r = std::abs(z);
  if (r <= detail::series_radius) return detail::h0_series(z);
  if (r < detail::asymptotic_radius) return detail::h0_integral(z);
  return detail::h0_asymptotic(z);
}

cplx bessel_k0(cplx z) {
  check_k_domain(z);
  if (z.real() > 745.0) return 0.0;
  const double r = std::abs(z);
  if (r <= detail::series_radius) return detail::k0_series(z);
  if (r < detail::asymptotic_radius) return detail::k0_integral(z);
  return detail::k0_asymptotic(z);
}

cplx biharmonic_bracket(cplx z) {
  if (z == cplx(0.0)) return 1.0;
  const double r = std::abs(z);
  if (r <= detail::series_radius) {
    // J0 + (4i/pi) sum_{k odd} (H_k - ln(z/2) - gamma) q^k/(k!)^2
    const cplx q = 0.25 * z * z;
    const cplx l = std::log(0.5 * z) + euler_gamma;
    cplx t = 1.0, j0 = 1.0, odd = 0.0;
    double hk = 0.0, sign = 1.0;
    for (int k = 1; k < 200; ++k) {
      t *= q / double(k * k);
      hk += 1.0 / k;
      sign = -sign;
      j0 += sign * t;
      if (k & 1) odd += (hk - l) * t;
      if (std::abs(t) < eps && k > 2) break;
    }
    return j0 + (4.0 * I / pi) * odd;
  }
  cplx h = hankel1_0(z);
  if (z.real() < 42.0) h += (2.0 * I / pi) * bessel_k0(z);
  return h;
}

}  // namespace plate::specfun
