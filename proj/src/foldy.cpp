#include "plate/foldy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "plate/greens.hpp"
#include "plate/specfun.hpp"

namespace plate {

namespace {

// Orders kept when sweeping column fields; columns other than the nearest
// are at least d_x/2 away.
int sweep_orders(cplx beta, double kappa, double dx, double dy) {
  const double step = 2.0 * pi / dy;
  return int((std::abs(kappa) + std::abs(beta) + 80.0 / dx) / step) + 2;
}

// Column field without the 40/|y| order growth: the bracket sum converges
// absolutely on and near the column, so a fixed order count is enough.
cplx near_column(cplx beta, double kappa, double dy, double along, double across) {
  constexpr int P = 256;
  const double step = 2.0 * pi / dy;
  const double k0 = kappa - std::round(kappa / step) * step;
  const cplx b2 = beta * beta;
  const double y = std::abs(across);
  cplx acc = 0.0;
  for (int p = P; p >= -P; --p) {
    const double kp = k0 + p * step;
    const cplx chi = sqrt_upper(b2 - kp * kp);
    const cplx tau = std::sqrt(b2 + kp * kp);
    acc += std::exp(I * kp * along) * (std::exp(I * chi * y) / chi + I * std::exp(-tau * y) / tau);
  }
  return I / (8.0 * b2) * (2.0 / dy) * acc;
}

}  // namespace

std::vector<double> ScattererSet::positions() const {
  std::vector<double> x(count);
  for (int k = 0; k < count; ++k) x[k] = k * spec.pitch();
  return x;
}

cplx incident_field(const KernelSpec& spec, const IncidentWave& wave, double x, double y) {
  const Forcing f = forcing_for(spec, wave);
  const cplx ky = spec.mode == KernelMode::single_grating ? spec.beta_damped() * std::sin(wave.psi)
                                                          : cplx(spec.kappa_y);
  return std::exp(I * (f.kappa * x + ky * y));
}

FoldySolution foldy_solve(const ScattererSet& set, const IncidentWave& wave, const FoldyOptions& opt) {
  set.spec.validate();
  wave.validate();
  const int n = set.count;
  if (n < 1 || n > opt.max_sites)
    throw Error(ErrorCode::invalid_config, "foldy: site count outside [1, " + std::to_string(opt.max_sites) + "]");
  const std::vector<cplx> g = kernel_coefficients(set.spec, n - 1);
  const Forcing f = forcing_for(set.spec, wave);

  Eigen::MatrixXcd M(n, n);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) M(m, k) = g[std::abs(m - k)];
  Eigen::VectorXcd rhs(n);
  cplx tp = 1.0;
  for (int m = 0; m < n; ++m, tp *= f.t) rhs(m) = -tp;

  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
  const Eigen::VectorXcd a = lu.solve(rhs);

  FoldySolution out;
  out.residual = (M * a - rhs).cwiseAbs().maxCoeff() / rhs.cwiseAbs().maxCoeff();
  const double rc = lu.rcond();
  out.condition = rc > 0.0 ? 1.0 / rc : INFINITY;
  out.ill_conditioned = out.condition > opt.ill_conditioned;
  out.coeffs.A.assign(a.data(), a.data() + n);
  out.coeffs.positions = set.positions();
  return out;
}

FieldMap foldy_field(const ScattererSet& set, const IncidentWave& wave, const std::vector<cplx>& A,
                     const GridSpec& grid) {
  if (grid.nx < 1 || grid.ny < 1) throw Error(ErrorCode::invalid_config, "field: empty grid");
  FieldMap fm;
  fm.grid = grid;
  for (int i = 0; i < grid.nx; ++i)
    fm.x.push_back(grid.nx == 1 ? grid.x0 : grid.x0 + (grid.x1 - grid.x0) * i / (grid.nx - 1));
  for (int j = 0; j < grid.ny; ++j)
    fm.y.push_back(grid.ny == 1 ? grid.y0 : grid.y0 + (grid.y1 - grid.y0) * j / (grid.ny - 1));
  const size_t npts = size_t(grid.nx) * grid.ny;
  fm.incident.resize(npts);
  fm.scattered.assign(npts, 0.0);
  fm.total.resize(npts);

  const KernelSpec& spec = set.spec;
  const cplx beta = spec.beta_damped();
  const double h = spec.pitch();
  const int n = int(A.size());

  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i) fm.incident[size_t(j) * grid.nx + i] = incident_field(spec, wave, fm.x[i], fm.y[j]);

  if (spec.mode == KernelMode::single_grating) {
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        cplx acc = 0.0;
        for (int k = n - 1; k >= 0; --k)
          acc += A[k] * greens::green_free(beta, std::hypot(fm.x[i] - k * h, fm.y[j]));
        fm.scattered[size_t(j) * grid.nx + i] = acc;
      }
  } else {
    // Column sources: plane-wave orders in y, swept along x with
    // left/right running sums; the nearest column is summed directly.
    const double dy = spec.geometry.dy;
    const double step = 2.0 * pi / dy;
    const double k0 = spec.kappa_y - std::round(spec.kappa_y / step) * step;
    const int P = sweep_orders(beta, k0, h, dy);
    const cplx b2 = beta * beta;
    const cplx pref = I / (8.0 * b2) * (2.0 / dy);
    for (int p = -P; p <= P; ++p) {
      const double kp = k0 + p * step;
      const cplx chi = sqrt_upper(b2 - kp * kp);
      const cplx tau = std::sqrt(b2 + kp * kp);
      const cplx ec = std::exp(I * chi * h), et = std::exp(-tau * h);
      // left[k] = sum_{m <= k} A_m e^{i chi (x_k - x_m)}, right[k] over m >= k
      std::vector<cplx> lc(n), lt(n), rc(n), rt(n);
      for (int k = 0; k < n; ++k) {
        lc[k] = (k ? lc[k - 1] * ec : 0.0) + A[k];
        lt[k] = (k ? lt[k - 1] * et : 0.0) + A[k];
      }
      for (int k = n - 1; k >= 0; --k) {
        rc[k] = (k + 1 < n ? rc[k + 1] * ec : 0.0) + A[k];
        rt[k] = (k + 1 < n ? rt[k + 1] * et : 0.0) + A[k];
      }
      for (int i = 0; i < grid.nx; ++i) {
        const double x = fm.x[i];
        const int kn = std::clamp(int(std::lround(x / h)), 0, n - 1);
        cplx col = 0.0;
        if (kn >= 1) {
          const double d = x - (kn - 1) * h;
          col += lc[kn - 1] * std::exp(I * chi * d) / chi + I * lt[kn - 1] * std::exp(-tau * d) / tau;
        }
        if (kn + 1 < n) {
          const double d = (kn + 1) * h - x;
          col += rc[kn + 1] * std::exp(I * chi * d) / chi + I * rt[kn + 1] * std::exp(-tau * d) / tau;
        }
        col *= pref;
        for (int j = 0; j < grid.ny; ++j)
          fm.scattered[size_t(j) * grid.nx + i] += col * std::exp(I * kp * fm.y[j]);
      }
    }
    for (int i = 0; i < grid.nx; ++i) {
      const int kn = std::clamp(int(std::lround(fm.x[i] / h)), 0, n - 1);
      for (int j = 0; j < grid.ny; ++j)
        fm.scattered[size_t(j) * grid.nx + i] += A[kn] * near_column(beta, spec.kappa_y, dy, fm.y[j], fm.x[i] - kn * h);
    }
  }
  for (size_t q = 0; q < npts; ++q) fm.total[q] = fm.incident[q] + fm.scattered[q];
  return fm;
}

GratingEnergy infinite_grating_energy(const IncidentWave& wave, double s, int P) {
  wave.validate();
  const double beta = wave.beta;
  const double chi0 = beta * std::sin(wave.psi);
  if (!(chi0 > 0.0)) throw Error(ErrorCode::domain, "energy: need 0 < psi < pi");
  const double kappa = beta * std::cos(wave.psi);
  greens::check_wood(beta, kappa, s, 1e-8);
  greens::SumOptions opt;
  opt.P = P;
  const cplx g0 = greens::grating_green_spectral(beta, 0.0, 0.0, kappa, s, opt);
  const cplx A = -1.0 / g0;
  const cplx pref = A * I / (8.0 * beta * beta) * (2.0 / s);
  GratingEnergy out;
  for (const auto& t : greens::grating_sum_terms(beta, kappa, s, P)) {
    if (!t.propagating) continue;
    const double chi = t.chi_p.real();
    const cplx r = pref / chi;
    const cplx tr = (t.p == 0 ? 1.0 : 0.0) + r;
    OrderEnergy e{t.p, chi * std::norm(r) / chi0, chi * std::norm(tr) / chi0};
    out.reflected_total += e.reflected;
    out.transmitted_total += e.transmitted;
    out.orders.push_back(e);
  }
  return out;
}

}  // namespace plate
