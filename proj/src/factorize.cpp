#include "plate/factorize.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

namespace plate {

namespace {

constexpr double two_pi = 2.0 * pi;
constexpr double max_center_distance = 0.5;

// Forward DFT (sign -1), unnormalized.
std::vector<cplx> dft(const std::vector<cplx>& in, int sign = FFTW_FORWARD) {
  const int n = int(in.size());
  std::vector<cplx> out(n);
  std::vector<cplx> buf(in);
  fftw_plan plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(buf.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), sign,
                                    FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

// log K along a closed sequence of samples, phase unwrapped sequentially.
// Returns the winding number of the closed loop.
int unwrap_log(const std::vector<cplx>& k, std::vector<cplx>& L) {
  const size_t n = k.size();
  L.resize(n);
  double ph = std::arg(k[0]);
  L[0] = cplx(std::log(std::abs(k[0])), ph);
  for (size_t j = 1; j < n; ++j) {
    ph += std::arg(k[j] / k[j - 1]);
    L[j] = cplx(std::log(std::abs(k[j])), ph);
  }
  const double close = ph + std::arg(k[0] / k[n - 1]) - std::arg(k[0]);
  return int(std::lround(close / two_pi));
}

void check_zero(const std::vector<cplx>& k, double guard) {
  double lo = INFINITY, hi = 0.0;
  for (const cplx& v : k) {
    lo = std::min(lo, std::abs(v));
    hi = std::max(hi, std::abs(v));
  }
  if (!(lo > guard * hi) || !std::isfinite(hi))
    throw Error(ErrorCode::zero_on_contour, "factorize: kernel vanishes (or is singular) on the contour");
}

// Branch of log K(z) closest to a reference value.
cplx log_near(cplx k, cplx ref) {
  cplx l(std::log(std::abs(k)), std::arg(k));
  l.imag(l.imag() + two_pi * std::round((ref.imag() - l.imag()) / two_pi));
  return l;
}

}  // namespace

void FactorizationConfig::validate() const {
  if (!(delta > 0.0 && delta < 0.1))
    throw Error(ErrorCode::invalid_config, "factorization delta must lie in (0, 0.1)");
  if (n_intervals < 256 || n_intervals % 2 != 0)
    throw Error(ErrorCode::invalid_config, "n_intervals must be even and >= 256");
}

// ---------------------------------------------------------------- AngleWarp

AngleWarp::AngleWarp(const std::vector<WarpCenter>& centers) {
  const double a = std::min(1.0, 2.0 / std::max<size_t>(1, centers.size()));
  norm_ = 1.0;
  for (const auto& c : centers) {
    bumps_.push_back({c.angle, std::exp(-2.0 * c.distance), a});
    norm_ += a;
  }
}

double AngleWarp::u(double theta) const {
  double acc = theta;
  for (const auto& b : bumps_) {
    const double phi = theta - b.angle;
    acc += b.weight * (phi + 2.0 * std::atan2(b.r * std::sin(phi), 1.0 - b.r * std::cos(phi)));
  }
  // shift so that u(0) = 0
  double at0 = 0.0;
  for (const auto& b : bumps_) {
    const double phi = -b.angle;
    at0 += b.weight * (phi + 2.0 * std::atan2(b.r * std::sin(phi), 1.0 - b.r * std::cos(phi)));
  }
  return (acc - at0) / norm_;
}

double AngleWarp::du(double theta) const {
  double acc = 1.0;
  for (const auto& b : bumps_) {
    const double c = std::cos(theta - b.angle);
    acc += b.weight * (1.0 - b.r * b.r) / (1.0 - 2.0 * b.r * c + b.r * b.r);
  }
  return acc / norm_;
}

double AngleWarp::theta(double uu) const {
  if (bumps_.empty()) return uu;
  // u(theta) - theta is 2 pi periodic and bounded by 2 pi in magnitude.
  // Safeguarded Newton: bisect whenever a step leaves the bracket or fails
  // to halve the residual.
  double lo = uu - two_pi, hi = uu + two_pi, th = uu, fprev = INFINITY;
  for (int it = 0; it < 400; ++it) {
    const double f = u(th) - uu;
    if (std::abs(f) < 1e-15 || hi - lo < 1e-15 * std::max(1.0, std::abs(th))) break;
    if (f > 0) hi = th;
    else lo = th;
    double next = th - f / du(th);
    if (!(next > lo && next < hi) || std::abs(f) > 0.5 * fprev) next = 0.5 * (lo + hi);
    fprev = std::abs(f);
    if (next == th) break;
    th = next;
  }
  return th;
}

// ---------------------------------------------------------- implementations

struct FactorizedKernel::Impl {
  KernelSpec spec;
  int winding = 0;
  virtual ~Impl() = default;
  virtual FactorizationMode mode() const = 0;
  virtual int nodes() const = 0;
  virtual cplx log_plus(cplx z) const = 0;
  virtual cplx log_minus(cplx z) const = 0;
  virtual std::vector<cplx> inverse_plus_taylor(int lmax) const = 0;
  virtual std::vector<cplx> log_plus_on_circle(double radius, int m) const {
    std::vector<cplx> out(m);
    for (int j = 0; j < m; ++j) out[j] = log_plus(std::polar(radius, two_pi * j / m));
    return out;
  }
  virtual double offset() const { return 0.0; }
};

namespace {

struct WarpedImpl final : FactorizedKernel::Impl {
  AngleWarp warp;
  int n = 0;
  std::vector<double> th;
  std::vector<cplx> rho, L, w;  // nodes, log K, d theta weights
  std::vector<cplx> coef;       // trig interpolation of L in u

  FactorizationMode mode() const override { return FactorizationMode::warped; }
  int nodes() const override { return n; }

  cplx interp(double theta, cplx* dldu = nullptr) const {
    const double uu = warp.u(theta);
    cplx acc = 0.0, dacc = 0.0;
    const int h = n / 2;
    for (int k = 0; k < n; ++k) {
      const int m = k < h ? k : k - n;
      if (k == h) {
        acc += coef[k] * std::cos(h * uu);
        dacc += -coef[k] * double(h) * std::sin(h * uu);
        continue;
      }
      const cplx e = std::polar(1.0, m * uu);
      acc += coef[k] * e;
      dacc += I * double(m) * coef[k] * e;
    }
    if (dldu) *dldu = dacc;
    return acc;
  }

  // (1/2 pi i) oint (L - c)/(rho - z) d rho by the warped trapezoid rule;
  // node-coincident z uses the derivative of the interpolant.
  cplx cauchy(cplx z, cplx c) const {
    cplx acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const cplx dz = rho[j] - z;
      if (std::abs(dz) < 1e-13) {
        cplx dldu;
        interp(th[j], &dldu);
        acc += w[j] * rho[j] * (dldu * warp.du(th[j]) / (I * rho[j]));
        continue;
      }
      acc += w[j] * rho[j] * (L[j] - c) / dz;
    }
    return acc / two_pi;
  }

  bool near_circle(cplx z) const {
    const double r = std::abs(z);
    return r > 0.5 && r < 2.0;
  }

  cplx log_exact(cplx z, cplx ref) const { return log_near(kernel_spectral(spec, z), ref); }

  cplx log_plus(cplx z) const override {
    if (!near_circle(z)) {
      if (std::abs(z) > 1.0) throw Error(ErrorCode::domain, "log_k_plus: z outside the region of analyticity");
      return cauchy(z, 0.0);
    }
    const cplx ls = interp(std::arg(z));
    if (std::abs(z) <= 1.0) return ls + cauchy(z, ls);
    // L+ = L - L- outside the unit circle
    return log_exact(z, ls) + cauchy(z, ls);
  }

  cplx log_minus(cplx z) const override {
    if (!near_circle(z)) {
      if (std::abs(z) < 1.0) throw Error(ErrorCode::domain, "log_k_minus: z inside the region of analyticity");
      return -cauchy(z, 0.0);
    }
    const cplx ls = interp(std::arg(z));
    if (std::abs(z) >= 1.0) return -cauchy(z, ls);
    return log_exact(z, ls) - ls - cauchy(z, ls);
  }

  std::vector<cplx> inverse_plus_taylor(int lmax) const override {
    // midpoint grid of the same warp, refined so that z^-lmax is resolved
    int M = std::max(n, int(std::ceil(4.0 * warp.total_weight() * (lmax + 1))));
    M += M % 2;
    std::vector<cplx> f(M), zm(M);
    std::vector<double> wm(M);
    for (int m = 0; m < M; ++m) {
      const double t = warp.theta(two_pi * (m + 0.5) / M);
      zm[m] = std::polar(1.0, t);
      wm[m] = (two_pi / M) / warp.du(t);
      const cplx ls = log_exact(zm[m], interp(t));
      f[m] = std::exp(-(ls + cauchy(zm[m], ls)));
    }
    std::vector<cplx> a(lmax + 1, 0.0);
    for (int m = 0; m < M; ++m) {
      const cplx step = std::conj(zm[m]);
      cplx p = wm[m] * f[m];
      for (int l = 0; l <= lmax; ++l) {
        a[l] += p;
        p *= step;
      }
    }
    for (auto& v : a) v /= two_pi;
    return a;
  }
};

struct CircleImpl final : FactorizedKernel::Impl {
  double dc = 0.0;
  int n = 0;
  std::vector<cplx> ell;  // Laurent coefficients of log K, FFT order

  FactorizationMode mode() const override { return FactorizationMode::circle_radius; }
  int nodes() const override { return n; }
  double offset() const override { return dc; }

  cplx log_plus(cplx z) const override {
    cplx acc = 0.0, p = 1.0;
    for (int m = 0; m < n / 2; ++m) {
      acc += ell[m] * p;
      p *= z;
    }
    return acc;
  }

  cplx log_minus(cplx z) const override {
    const cplx zi = 1.0 / z;
    cplx acc = 0.0, p = zi;
    for (int m = 1; m <= n / 2; ++m) {
      acc += ell[n - m] * p;
      p *= zi;
    }
    return acc;
  }

  std::vector<cplx> log_plus_on_circle(double radius, int m) const override {
    if (m != n) return Impl::log_plus_on_circle(radius, m);
    std::vector<cplx> c(n, 0.0);
    double rp = 1.0;
    for (int k = 0; k < n / 2; ++k) {
      c[k] = ell[k] * rp;
      rp *= radius;
    }
    return dft(c, FFTW_BACKWARD);
  }

  std::vector<cplx> inverse_plus_taylor(int lmax) const override {
    if (lmax >= n / 2) throw Error(ErrorCode::domain, "inverse_plus_taylor: lmax too large");
    const double r = std::exp(-dc);
    std::vector<cplx> f = log_plus_on_circle(r, n);
    for (auto& v : f) v = std::exp(-v);
    const std::vector<cplx> b = dft(f);
    std::vector<cplx> a(lmax + 1);
    for (int l = 0; l <= lmax; ++l) a[l] = b[l] / double(n) * std::exp(l * dc);
    return a;
  }
};

std::vector<WarpCenter> collect_centers(const KernelSpec& spec, std::optional<cplx> pole) {
  std::vector<WarpCenter> c;
  for (const auto& s : kernel_singularities(spec, max_center_distance))
    c.push_back({s.angle, s.distance});
  for (const cplx& z0 : kernel_zeros_near_circle(spec, max_center_distance)) {
    const double d = std::abs(std::log(std::abs(z0)));
    c.push_back({std::arg(z0), d});
    if (std::abs(std::arg(z0)) > 1e-12) c.push_back({-std::arg(z0), d});
  }
  if (pole) {
    const double d = std::abs(std::log(std::abs(*pole)));
    if (d <= max_center_distance) c.push_back({std::arg(*pole), d});
  }
  return c;
}

}  // namespace

// --------------------------------------------------------------- public API

FactorizedKernel::FactorizedKernel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

const KernelSpec& FactorizedKernel::spec() const { return impl_->spec; }
FactorizationMode FactorizedKernel::mode() const { return impl_->mode(); }
int FactorizedKernel::winding_number() const { return impl_->winding; }
int FactorizedKernel::nodes() const { return impl_->nodes(); }
cplx FactorizedKernel::log_k_plus(cplx z) const { return impl_->log_plus(z); }
cplx FactorizedKernel::log_k_minus(cplx z) const { return impl_->log_minus(z); }
cplx FactorizedKernel::kernel(cplx z) const { return kernel_spectral(impl_->spec, z); }
std::vector<cplx> FactorizedKernel::inverse_plus_taylor(int lmax) const {
  return impl_->inverse_plus_taylor(lmax);
}
std::vector<cplx> FactorizedKernel::log_k_plus_on_circle(double radius, int m) const {
  return impl_->log_plus_on_circle(radius, m);
}
double FactorizedKernel::contour_offset() const { return impl_->offset(); }

std::vector<cplx> kernel_zeros_near_circle(const KernelSpec& spec, double max_distance,
                                           int scan_points) {
  std::vector<cplx> k(scan_points);
  std::vector<double> mag(scan_points);
  for (int j = 0; j < scan_points; ++j) {
    try {
      k[j] = kernel_spectral(spec, std::polar(1.0, two_pi * j / scan_points));
      mag[j] = std::abs(k[j]);
    } catch (const Error&) {
      mag[j] = INFINITY;
    }
    if (!std::isfinite(mag[j])) mag[j] = INFINITY;
  }
  std::vector<cplx> zeros;
  for (int j = 0; j < scan_points; ++j) {
    const double a = mag[(j + scan_points - 1) % scan_points], b = mag[(j + 1) % scan_points];
    if (!(mag[j] <= a && mag[j] <= b)) continue;
    cplx z = std::polar(1.0, two_pi * j / scan_points);
    bool ok = false;
    try {
      for (int it = 0; it < 60; ++it) {
        const double h = 1e-6;
        const cplx f = kernel_spectral(spec, z);
        const cplx df = (kernel_spectral(spec, z * (1.0 + h)) - kernel_spectral(spec, z * (1.0 - h))) /
                        (2.0 * h * z);
        const cplx dz = f / df;
        z -= dz;
        if (!std::isfinite(std::abs(z)) || std::abs(std::log(std::abs(z))) > 2.0 * max_distance + 0.5)
          break;
        if (std::abs(dz) < 1e-13) {
          ok = true;
          break;
        }
      }
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) continue;
    if (std::abs(z) > 1.0) z = 1.0 / z;
    if (std::abs(std::log(std::abs(z))) > max_distance) continue;
    bool dup = false;
    for (const cplx& q : zeros) dup = dup || std::abs(q - z) < 1e-8;
    if (!dup) zeros.push_back(z);
  }
  return zeros;
}

FactorizedKernel factorize(const KernelSpec& spec_in, const FactorizationConfig& cfg,
                           std::optional<cplx> forcing_pole) {
  spec_in.validate();
  cfg.validate();
  KernelSpec spec = spec_in;
  if (spec.delta_beta == 0.0) spec.delta_beta = cfg.delta;
  const std::vector<WarpCenter> centers = collect_centers(spec, forcing_pole);

  if (cfg.mode == FactorizationMode::warped) {
    auto impl = std::make_shared<WarpedImpl>();
    impl->spec = spec;
    impl->warp = AngleWarp(centers);
    const int n = cfg.n_intervals;
    impl->n = n;
    // 2n samples: even ones are quadrature nodes, odd ones refine the unwrap
    std::vector<double> th2(2 * n);
    std::vector<cplx> k2(2 * n), L2;
    for (int j = 0; j < 2 * n; ++j) {
      th2[j] = impl->warp.theta(two_pi * j / (2 * n));
      k2[j] = kernel_spectral(spec, std::polar(1.0, th2[j]));
    }
    check_zero(k2, cfg.zero_guard);
    impl->winding = unwrap_log(k2, L2);
    if (impl->winding != 0)
      throw Error(ErrorCode::winding,
                  "factorize: log K has winding number " + std::to_string(impl->winding));
    impl->th.resize(n);
    impl->rho.resize(n);
    impl->L.resize(n);
    impl->w.resize(n);
    for (int j = 0; j < n; ++j) {
      impl->th[j] = th2[2 * j];
      impl->rho[j] = std::polar(1.0, th2[2 * j]);
      impl->L[j] = L2[2 * j];
      impl->w[j] = (two_pi / n) / impl->warp.du(th2[2 * j]);
    }
    impl->coef = dft(impl->L);
    for (auto& c : impl->coef) c /= double(n);
    return FactorizedKernel(impl);
  }

  auto impl = std::make_shared<CircleImpl>();
  impl->spec = spec;
  double dmin = max_center_distance;
  for (const auto& c : centers) dmin = std::min(dmin, c.distance);
  impl->dc = 0.5 * dmin;
  int n = 64;
  while (n < 64.0 / impl->dc) n *= 2;
  n = std::max(n, cfg.n_intervals + cfg.n_intervals % 2);
  impl->n = n;
  std::vector<cplx> lo(n), hi(n), Llo, Lhi;
  for (int j = 0; j < n; ++j) {
    lo[j] = kernel_spectral(spec, std::polar(std::exp(-impl->dc), two_pi * j / n));
    hi[j] = kernel_spectral(spec, std::polar(std::exp(impl->dc), two_pi * j / n));
  }
  check_zero(lo, cfg.zero_guard);
  check_zero(hi, cfg.zero_guard);
  const int w1 = unwrap_log(lo, Llo), w2 = unwrap_log(hi, Lhi);
  impl->winding = w1 != 0 ? w1 : w2;
  if (w1 != 0 || w2 != 0)
    throw Error(ErrorCode::winding, "factorize: log K winds on C+ or C- (" + std::to_string(w1) +
                                        ", " + std::to_string(w2) + ")");
  // L+ from C-, L- from C+
  const std::vector<cplx> clo = dft(Llo), chi = dft(Lhi);
  // Undo the radius scaling only where the coefficients stand above the
  // roundoff floor; beyond that the e^{m delta_c} factor amplifies noise.
  auto cutoff = [&](const std::vector<cplx>& c, bool negative) {
    double top = 0.0;
    for (const cplx& v : c) top = std::max(top, std::abs(v));
    int m = n / 2;
    while (m > 1 && std::abs(c[negative ? n - m : m]) < 1e-14 * top) --m;
    return m;
  };
  const int mp = cutoff(clo, false), mm = cutoff(chi, true);
  impl->ell.assign(n, 0.0);
  for (int m = 0; m <= std::min(mp, n / 2 - 1); ++m)
    impl->ell[m] = clo[m] / double(n) * std::exp(m * impl->dc);
  for (int m = 1; m <= mm; ++m) impl->ell[n - m] = chi[n - m] / double(n) * std::exp(m * impl->dc);
  return FactorizedKernel(impl);
}

}  // namespace plate
