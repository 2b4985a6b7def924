#pragma once

#include <vector>

#include "plate/wienerhopf.hpp"

namespace plate {

// Sites 0..count-1 at abscissae k * pitch: single pins (grating mode) or
// vertical gratings of period d_y (lattice mode), as described by spec.
struct ScattererSet {
  KernelSpec spec;
  int count = 500;
  std::vector<double> positions() const;
};

struct FoldyOptions {
  int max_sites = 4000;
  double ill_conditioned = 1e12;  // condition estimate above which a warning is set
};

struct FoldySolution {
  CoefficientSequence coeffs;
  double residual = 0.0;  // max_m |(G A + u_i)_m| / max_m |u_i|
  double condition = 0.0; // 1 / rcond estimate
  bool ill_conditioned = false;
};

// Dense solve of sum_k A_k G_{|m-k|} = -u_i(m) for m = 0..count-1.
FoldySolution foldy_solve(const ScattererSet& set, const IncidentWave& wave,
                          const FoldyOptions& opt = {});

struct GridSpec {
  double x0 = -10, x1 = 10, y0 = -5, y1 = 5;
  int nx = 600, ny = 300;
};

struct FieldMap {
  GridSpec grid;
  std::vector<double> x, y;
  // row-major, index j * nx + i for (x[i], y[j])
  std::vector<cplx> incident, scattered, total;
  const cplx& at(const std::vector<cplx>& v, int i, int j) const { return v[size_t(j) * grid.nx + i]; }
};

// Incident plane wave plus the field radiated by the sources A_k.
FieldMap foldy_field(const ScattererSet& set, const IncidentWave& wave,
                     const std::vector<cplx>& A, const GridSpec& grid);

// Incident field at (x, y) consistent with the site phases used by the solver.
cplx incident_field(const KernelSpec& spec, const IncidentWave& wave, double x, double y);

struct OrderEnergy {
  int p;
  double reflected, transmitted;
};

struct GratingEnergy {
  std::vector<OrderEnergy> orders;  // propagating orders only
  double reflected_total = 0.0, transmitted_total = 0.0;
};

// Pins at (j s, 0) for all j, incident e^{i beta (x cos psi + y sin psi)},
// 0 < psi < pi. Energies of the propagating orders reflected into y < 0 and
// transmitted into y > 0, weighted by chi_p / chi_0. Throws wood_anomaly near
// a pass-off.
GratingEnergy infinite_grating_energy(const IncidentWave& wave, double s, int P = 200);

}  // namespace plate
