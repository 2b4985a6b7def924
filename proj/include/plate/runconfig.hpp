#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plate/foldy.hpp"

namespace plate {

inline constexpr const char* tool_version = "platecli 0.1.0";

enum class Command { field, coeffs, energy, contours, stack_modes, orders, kernel_check };
enum class Solver { foldy, wiener_hopf, both };

struct RunConfig {
  Command command = Command::coeffs;
  KernelMode mode = KernelMode::single_grating;
  LatticeGeometry geometry;
  IncidentWave wave{3.1, 0.0};
  std::optional<double> kappa_y;  // lattice mode; default beta sin psi
  int n_pins = 500;
  int k_max = 30;
  double delta = 0.0025;
  int intervals = 1200;
  FactorizationMode factorization = FactorizationMode::warped;
  Solver solver = Solver::foldy;
  GridSpec grid;
  // sweeps (energy, stack-modes) and beta lists (contours)
  double beta_start = 3.0, beta_stop = 4.5, beta_step = 0.005;
  std::vector<double> betas;
  int contour_grid = 400;
  int stack_m = 2;
  int orders = 20;
  std::string out = "out";

  void validate() const;
};

// Sets one key (flag name without dashes, e.g. "n-pins"). Throws
// invalid_config for unknown keys or malformed/out-of-range values.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

// Flat "key = value" text; '#' starts a comment.
void apply_config_file(RunConfig& cfg, const std::string& path);

// Every key with its resolved value, in a fixed order.
std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& cfg);

// Names accepted by apply_setting, in the order of resolved_settings.
const std::vector<std::string>& setting_keys();

const char* command_name(Command c);
const char* solver_name(Solver s);

// Fixed 17-significant-digit text, so identical runs give identical bytes.
std::string fmt17(double v);

}  // namespace plate
