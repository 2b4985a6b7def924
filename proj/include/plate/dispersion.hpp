#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "plate/kernel.hpp"

namespace plate {

struct SpectralOrder {
  int p;
  double cos_phi;  // cos psi + 2 pi p / (s beta)
  cplx phi;        // arccos, complex continuation when |cos_phi| > 1
  bool propagating;
};

// Orders |p| <= P; the real phi of propagating orders are the shadow-boundary
// directions from the array's end.
std::vector<SpectralOrder> spectral_orders(const IncidentWave& wave, double s, int P = 20);
std::vector<double> shadow_boundaries(const IncidentWave& wave, double s);

enum class ResonanceKind { none, inward, outward };
struct Resonance {
  ResonanceKind kind = ResonanceKind::none;
  int p = 0;
};
// outward: some order p != 0 has cos phi_p = -1; inward: cos phi_p = +1.
Resonance resonance_check(const IncidentWave& wave, double s, double tol = 1e-9);
const char* resonance_name(ResonanceKind k);

// 8 beta^2 K(e^{i kx dx}; ky) for the undamped lattice kernel; real on the
// unit circle. Columns are vertical gratings of period dy, spaced dx.
double lattice_kernel_real(const LatticeGeometry& g, double beta, double kx, double ky, int P = 64);

using Point2 = std::array<double, 2>;

struct ContourOptions {
  int nx = 400, ny = 400;  // Brillouin-zone grid (inclusive of the edges)
  int orders = 64;
  double zero_tol = 1e-6;  // polished |f| relative to the grid's median |f|
};

struct IsoContour {
  double beta = 0.0;
  std::vector<std::vector<Point2>> polylines;  // (kx, ky) vertices
  double residual = 0.0;                       // max |f| over vertices / median |f|
  bool empty() const { return polylines.empty(); }
};

// Zero set of the lattice kernel over [-pi/dx, pi/dx] x [-pi/dy, pi/dy]:
// sign changes on grid edges, bisection to machine precision, rejection of
// sign changes caused by poles (light lines), marching-squares linking.
IsoContour isofrequency_scan(const LatticeGeometry& g, double beta, const ContourOptions& opt = {});

struct LightCircle {
  int n, m;
  double cx, cy, r;  // centre (-2 pi n/dx, -2 pi m/dy), radius beta
};

struct LightLine {
  int n1, m1, n2, m2;
  double a, b, c;               // a kx + b ky = c with a^2 + b^2 = 1, b >= 0
  std::vector<Point2> crossings;  // circle intersections at this beta
  std::optional<std::array<Point2, 2>> segment;  // line clipped to the window
};

struct LightLineSet {
  std::vector<LightCircle> circles;
  std::vector<LightLine> lines;
};

// Projections of pairwise light-cone intersections: the perpendicular
// bisector of the two circle centres, for every pair with |n|, |m| <= cap
// whose circles intersect at beta. window = {kx0, kx1, ky0, ky1}, default
// the Brillouin zone.
LightLineSet light_line_projections(const LatticeGeometry& g, double beta, int cap = 2,
                                    std::optional<std::array<double, 4>> window = std::nullopt);

struct StackProblem {
  int M = 2;  // 2M + 1 gratings
  LatticeGeometry geometry;
  std::optional<double> kappa_y;  // fixed value, else beta sin psi
  double psi = 0.0;
  double beta0 = 3.0, beta1 = 3.3, step = 1e-3;
};

struct StackSample {
  double beta;
  double sigma_min;  // smallest / largest singular value
  cplx det;
  bool wood;  // too close to a pass-off to evaluate
};

struct StackModes {
  std::vector<StackSample> profile;
  std::vector<double> roots;         // refined minima of sigma_min
  std::vector<double> det_maxima;    // local maxima of |det|
  std::vector<double> det_minima;
  std::string kappa_y_rule;
};

// G_mk = G^q(beta, (m - k) dx; kappa_y, dy), m, k = 0..2M.
std::vector<std::vector<cplx>> stack_matrix(const StackProblem& p, double beta);
cplx stack_determinant(const StackProblem& p, double beta, bool reversed = false);
double stack_sigma_min(const StackProblem& p, double beta);
StackModes stack_modes(const StackProblem& p, double root_threshold = 1e-3);

struct Feature {
  std::string kind;   // "inflexion" or "dirac"
  std::string point;  // nearest symmetry point label, or "" when generic
  double beta;
  double kx, ky;
  double metric;      // arc length near the point (dirac), 0 for inflexion
};

struct FeatureOptions {
  double neighbourhood = 0.35;  // radius around symmetry points, in units of pi/dx
  double collapse = 0.25;       // dirac: local arc length below this fraction of the neighbourhood radius
};

// Inflexions: a contour crosses a symmetry point (the kernel changes sign
// there, not through a pole, between consecutive sweep values). Dirac-like
// candidates: contour inside a neighbourhood of a symmetry point shrinks
// away while close to the point, or its arc length has a local minimum below
// the collapse threshold. Candidates within three sweep steps are merged.
std::vector<Feature> stationary_features(const LatticeGeometry& g, const std::vector<IsoContour>& sweep,
                                         const FeatureOptions& opt = {});

// Scans betas, detects features, then bisects vanishing/appearing events
// with refine_steps extra scans each.
std::vector<Feature> stationary_features_refined(const LatticeGeometry& g, const std::vector<double>& betas,
                                                 const ContourOptions& copt = {}, const FeatureOptions& opt = {},
                                                 int refine_steps = 5);

}  // namespace plate
