#include "plate/kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "plate/simd.hpp"
#include "plate/specfun.hpp"

namespace plate {

namespace {

constexpr int default_orders = 64;

double wrap_angle(double a) { return std::remainder(a, 2.0 * pi); }

}  // namespace

void KernelSpec::validate() const {
  geometry.validate();
  if (!(beta > 0.0)) throw Error(ErrorCode::invalid_config, "kernel: beta must be > 0");
  if (delta_beta < 0.0) throw Error(ErrorCode::invalid_config, "kernel: delta_beta < 0");
  if (N < 1) throw Error(ErrorCode::invalid_config, "kernel: N < 1");
}

cplx remainder_F(cplx w, int N) {
  if (N < 0) throw Error(ErrorCode::domain, "remainder_F: N < 0");
  if (w == cplx(0.0)) return 0.0;
  if (std::abs(w) >= 1.0 && std::abs(std::arg(w)) < 1e-12)
    throw Error(ErrorCode::domain, "remainder_F: denominator vanishes on the path");
  const double n1 = N + 1.0;
  // t = u / sqrt(N + 1)
  auto f = [&](double u) -> cplx { return std::exp(-u * u) / (1.0 - w * std::exp(-u * u / n1)); };
  double err = 0.0;
  const cplx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, 7.0, 25,
                                                                                1e-13, &err);
  return (2.0 / pi) * std::pow(w, N + 1) / std::sqrt(n1) * v;
}

cplx kernel_remainder(cplx z, int N, cplx beta, double s) {
  const cplx e = std::exp(I * beta * s);
  return std::exp(-0.25 * I * pi) * std::sqrt(2.0 / (beta * s)) *
         (remainder_F(z * e, N) + remainder_F(e / z, N));
}

std::vector<cplx> kernel_coefficients(const KernelSpec& spec, int n) {
  spec.validate();
  const cplx beta = spec.beta_damped();
  const double h = spec.pitch();
  std::vector<cplx> g(n + 1);
  greens::SumOptions opt;
  for (int j = 0; j <= n; ++j) {
    g[j] = spec.mode == KernelMode::single_grating
               ? greens::green_free(beta, h * j)
               : greens::grating_green_spectral(beta, h * j, 0.0, spec.kappa_y, spec.geometry.dy, opt);
  }
  return g;
}

KernelValue kernel_eval(const KernelSpec& spec, cplx z, bool add_remainder) {
  spec.validate();
  if (z == cplx(0.0)) throw Error(ErrorCode::domain, "kernel_eval: z = 0");
  const cplx beta = spec.beta_damped();
  const double h = spec.pitch();
  const double zr = std::max(std::abs(z), 1.0 / std::abs(z));
  const cplx pref = I / (8.0 * beta * beta);

  if (spec.mode == KernelMode::single_grating) {
    const double rho = std::exp(-beta.imag() * h) * zr;
    if (rho > 1.0 + 1e-14)
      throw Error(ErrorCode::convergence, "kernel_eval: series does not decay at this z");
    cplx acc = 0.0;
    for (int j = spec.N; j >= 1; --j)
      acc += specfun::biharmonic_bracket(beta * (h * j)) * (std::pow(z, j) + std::pow(z, -j));
    acc += 1.0;
    double est = std::sqrt(2.0 / (pi * std::abs(beta) * h * spec.N)) * std::pow(rho, spec.N);
    est *= rho < 1.0 ? 1.0 / (1.0 - rho) : 1.0;
    if (add_remainder) {
      acc += kernel_remainder(z, spec.N, beta, h);
      est *= 1.0 / spec.N;
    }
    return {pref * acc, std::abs(pref) * est};
  }

  // lattice mode: column Green's functions at separations j d_x
  const double dy = spec.geometry.dy;
  double qmax = 0.0;
  for (const auto& t : greens::grating_sum_terms(std::abs(beta), spec.kappa_y, dy, 3)) {
    const cplx chi = sqrt_upper(beta * beta - t.kappa_p * t.kappa_p);
    qmax = std::max(qmax, std::exp(-chi.imag() * h));
  }
  const double rho = qmax * zr;
  if (rho > 1.0 + 1e-14)
    throw Error(ErrorCode::convergence, "kernel_eval: series does not decay at this z");
  greens::SumOptions opt;
  cplx acc = 0.0;
  for (int j = spec.N; j >= 1; --j)
    acc += greens::grating_green_spectral(beta, h * j, 0.0, spec.kappa_y, dy, opt) *
           (std::pow(z, j) + std::pow(z, -j));
  acc += greens::grating_green_spectral(beta, 0.0, 0.0, spec.kappa_y, dy, opt);
  double est = std::pow(rho, spec.N) * std::abs(pref) * 2.0 / dy;
  est *= rho < 1.0 ? 1.0 / (1.0 - rho) : 1.0;
  return {acc, est};
}

cplx kernel_spectral(const KernelSpec& spec, cplx z, int P) {
  if (z == cplx(0.0)) throw Error(ErrorCode::domain, "kernel_spectral: z = 0");
  if (P <= 0) P = default_orders;
  const cplx beta = spec.beta_damped();
  const cplx b2 = beta * beta;
  const cplx pref = I / (8.0 * b2);

  if (spec.mode == KernelMode::single_grating) {
    const double s = spec.geometry.s;
    const cplx kappa = -I * std::log(z) / s;
    greens::SumOptions opt;
    opt.P = P;
    return pref * greens::periodic_bracket_sum(beta, kappa, s, 0.0, 0.0, opt);
  }

  const double dx = spec.geometry.dx, dy = spec.geometry.dy;
  const double step = 2.0 * pi / dy;
  const double k0 = spec.kappa_y - std::round(spec.kappa_y / step) * step;
  if (beta.imag() == 0.0) greens::check_wood(beta.real(), k0, dy);
  const cplx zi = 1.0 / z;
  cplx acc = 0.0;
  for (int p = P; p >= 0; --p) {
    for (int sgn : {1, -1}) {
      if (p == 0 && sgn < 0) continue;
      const double kp = k0 + sgn * p * step;
      const cplx chi = sqrt_upper(b2 - kp * kp);
      const cplx tau = std::sqrt(b2 + kp * kp);
      const cplx q = std::exp(I * chi * dx);
      const cplx r = std::exp(-tau * dx);
      acc += (1.0 - q * q) / ((1.0 - q * z) * (1.0 - q * zi)) / chi +
             I * (1.0 - r * r) / ((1.0 - r * z) * (1.0 - r * zi)) / tau;
    }
  }
  acc += greens::order_sum_tail(beta, k0, dy, P);
  return pref * (2.0 / dy) * acc;
}

std::vector<KernelSingularity> kernel_singularities(const KernelSpec& spec, double max_distance) {
  std::vector<KernelSingularity> out;
  const cplx beta = spec.beta_damped();
  if (spec.mode == KernelMode::single_grating) {
    const double s = spec.geometry.s;
    const double d = beta.imag() * s;
    if (d <= max_distance) {
      // e^{i beta s} inside, e^{-i beta s} outside
      out.push_back({wrap_angle(beta.real() * s), d, true});
      out.push_back({wrap_angle(-beta.real() * s), d, false});
    }
    return out;
  }
  const double dx = spec.geometry.dx, dy = spec.geometry.dy;
  const double step = 2.0 * pi / dy;
  const double k0 = spec.kappa_y - std::round(spec.kappa_y / step) * step;
  const int P = int(std::ceil((std::abs(beta) + max_distance / dx) / step)) + 1;
  for (int p = -P; p <= P; ++p) {
    const double kp = k0 + p * step;
    const cplx chi = sqrt_upper(beta * beta - kp * kp);
    const double d = chi.imag() * dx;
    if (d > max_distance) continue;
    // poles at q_p (inside) and 1/q_p (outside)
    out.push_back({wrap_angle(chi.real() * dx), d, true});
    out.push_back({wrap_angle(-chi.real() * dx), d, false});
  }
  return out;
}

}  // namespace plate
