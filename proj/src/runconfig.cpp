#include "plate/runconfig.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace plate {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::invalid_config, what); }

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  double x = 0.0;
  // trailing "pi" multiplies, e.g. "0.25pi"
  if (t.size() >= 2 && t.compare(t.size() - 2, 2, "pi") == 0) {
    const std::string head = trim(t.substr(0, t.size() - 2));
    const double m = head.empty() ? 1.0 : parse_double(key, head);
    return m * pi;
  }
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || p != t.data() + t.size() || !std::isfinite(x))
    bad(key + ": not a finite number: '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  int x = 0;
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || p != t.data() + t.size()) bad(key + ": not an integer: '" + v + "'");
  return x;
}

std::vector<std::string> split(const std::string& v, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

template <class T>
void in_range(const std::string& key, T v, T lo, T hi) {
  if (v < lo || v > hi) {
    std::ostringstream os;
    os << key << ": " << v << " outside [" << lo << ", " << hi << "]";
    bad(os.str());
  }
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const RunConfig&)>;

struct Key {
  std::string name;
  Setter set;
  Getter get;
};

std::string join(const std::vector<double>& v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt17(v[i]);
  return s;
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      {"command",
       [](RunConfig& c, const std::string&, const std::string& v) {
         static const std::map<std::string, Command> m = {
             {"field", Command::field},       {"coeffs", Command::coeffs},
             {"energy", Command::energy},     {"contours", Command::contours},
             {"stack-modes", Command::stack_modes}, {"orders", Command::orders},
             {"kernel-check", Command::kernel_check}};
         auto it = m.find(trim(v));
         if (it == m.end()) bad("command: unknown '" + v + "'");
         c.command = it->second;
       },
       [](const RunConfig& c) { return std::string(command_name(c.command)); }},
      {"geometry",
       [](RunConfig& c, const std::string&, const std::string& v) {
         const std::string t = trim(v);
         if (t == "grating") c.mode = KernelMode::single_grating;
         else if (t == "lattice") c.mode = KernelMode::half_plane_lattice;
         else bad("geometry: expected grating or lattice, got '" + v + "'");
       },
       [](const RunConfig& c) {
         return std::string(c.mode == KernelMode::single_grating ? "grating" : "lattice");
       }},
      {"beta",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.wave.beta = parse_double(k, v); },
       [](const RunConfig& c) { return fmt17(c.wave.beta); }},
      {"psi",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.wave.psi = parse_double(k, v); },
       [](const RunConfig& c) { return fmt17(c.wave.psi); }},
      {"s",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.geometry.s = parse_double(k, v); },
       [](const RunConfig& c) { return fmt17(c.geometry.s); }},
      {"dx",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.geometry.dx = parse_double(k, v); },
       [](const RunConfig& c) { return fmt17(c.geometry.dx); }},
      {"dy",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.geometry.dy = parse_double(k, v); },
       [](const RunConfig& c) { return fmt17(c.geometry.dy); }},
      {"kappa-y",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (trim(v) == "auto") c.kappa_y.reset();
         else c.kappa_y = parse_double(k, v);
       },
       [](const RunConfig& c) { return c.kappa_y ? fmt17(*c.kappa_y) : std::string("auto"); }},
      {"n-pins",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.n_pins = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.n_pins); }},
      {"k-max",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.k_max = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.k_max); }},
      {"delta",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.delta = parse_double(k, v); },
       [](const RunConfig& c) { return fmt17(c.delta); }},
      {"intervals",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.intervals = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.intervals); }},
      {"factorization",
       [](RunConfig& c, const std::string&, const std::string& v) {
         const std::string t = trim(v);
         if (t == "warped") c.factorization = FactorizationMode::warped;
         else if (t == "circle") c.factorization = FactorizationMode::circle_radius;
         else bad("factorization: expected warped or circle, got '" + v + "'");
       },
       [](const RunConfig& c) {
         return std::string(c.factorization == FactorizationMode::warped ? "warped" : "circle");
       }},
      {"solver",
       [](RunConfig& c, const std::string&, const std::string& v) {
         const std::string t = trim(v);
         if (t == "foldy") c.solver = Solver::foldy;
         else if (t == "wiener-hopf") c.solver = Solver::wiener_hopf;
         else if (t == "both") c.solver = Solver::both;
         else bad("solver: expected foldy, wiener-hopf or both, got '" + v + "'");
       },
       [](const RunConfig& c) { return std::string(solver_name(c.solver)); }},
      {"grid",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const auto p = split(v, ',');
         if (p.size() != 6) bad("grid: expected x0,x1,y0,y1,nx,ny");
         c.grid = {parse_double(k, p[0]), parse_double(k, p[1]), parse_double(k, p[2]),
                   parse_double(k, p[3]), parse_int(k, p[4]), parse_int(k, p[5])};
       },
       [](const RunConfig& c) {
         const GridSpec& g = c.grid;
         return fmt17(g.x0) + "," + fmt17(g.x1) + "," + fmt17(g.y0) + "," + fmt17(g.y1) + "," +
                std::to_string(g.nx) + "," + std::to_string(g.ny);
       }},
      {"sweep",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         const auto p = split(v, ',');
         if (p.size() != 3) bad("sweep: expected start,stop,step");
         c.beta_start = parse_double(k, p[0]);
         c.beta_stop = parse_double(k, p[1]);
         c.beta_step = parse_double(k, p[2]);
       },
       [](const RunConfig& c) {
         return fmt17(c.beta_start) + "," + fmt17(c.beta_stop) + "," + fmt17(c.beta_step);
       }},
      {"betas",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.betas.clear();
         for (const auto& p : split(v, ',')) c.betas.push_back(parse_double(k, p));
       },
       [](const RunConfig& c) { return join(c.betas); }},
      {"contour-grid",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.contour_grid = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.contour_grid); }},
      {"stack-m",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.stack_m = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.stack_m); }},
      {"orders",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.orders = parse_int(k, v); },
       [](const RunConfig& c) { return std::to_string(c.orders); }},
      {"out",
       [](RunConfig& c, const std::string&, const std::string& v) {
         c.out = trim(v);
         if (c.out.empty()) bad("out: empty path");
       },
       [](const RunConfig& c) { return c.out; }},
  };
  return table;
}

}  // namespace

std::string fmt17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* command_name(Command c) {
  switch (c) {
    case Command::field: return "field";
    case Command::coeffs: return "coeffs";
    case Command::energy: return "energy";
    case Command::contours: return "contours";
    case Command::stack_modes: return "stack-modes";
    case Command::orders: return "orders";
    case Command::kernel_check: return "kernel-check";
  }
  return "?";
}

const char* solver_name(Solver s) {
  switch (s) {
    case Solver::foldy: return "foldy";
    case Solver::wiener_hopf: return "wiener-hopf";
    case Solver::both: return "both";
  }
  return "?";
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const Key& k : keys())
    if (k.name == key) {
      k.set(cfg, key, value);
      return;
    }
  bad("unknown key '" + key + "'");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config file '" + path + "'");
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) bad(path + ":" + std::to_string(n) + ": expected key = value");
    apply_setting(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
}

std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const Key& k : keys()) out.emplace_back(k.name, k.get(cfg));
  return out;
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const Key& k : keys()) v.push_back(k.name);
    return v;
  }();
  return names;
}

void RunConfig::validate() const {
  geometry.validate();
  wave.validate();
  in_range("beta", wave.beta, 1e-6, 1e3);
  in_range("psi", wave.psi, 0.0, pi);
  in_range("n-pins", n_pins, 1, 4000);
  in_range("k-max", k_max, 0, 10000);
  in_range("delta", delta, 0.0, 1.0);
  in_range("intervals", intervals, 16, 1 << 20);
  in_range("contour-grid", contour_grid, 8, 4000);
  in_range("stack-m", stack_m, 0, 50);
  in_range("orders", orders, 0, 10000);
  if (grid.nx < 1 || grid.ny < 1 || grid.nx * double(grid.ny) > 1e8 || !(grid.x1 >= grid.x0) ||
      !(grid.y1 >= grid.y0))
    bad("grid: need x0 <= x1, y0 <= y1, 1 <= nx, ny and nx*ny <= 1e8");
  if (!(beta_step > 0.0) || !(beta_stop >= beta_start) || !(beta_start > 0.0) ||
      (beta_stop - beta_start) / beta_step > 1e6)
    bad("sweep: need 0 < start <= stop and a positive step with at most 1e6 samples");
  for (double b : betas) in_range("betas", b, 1e-6, 1e3);
  if (command == Command::contours && betas.empty()) bad("contours: betas list is empty");
  if (command == Command::field && solver == Solver::both) bad("field: choose foldy or wiener-hopf");
  if (k_max >= n_pins && solver != Solver::wiener_hopf && command == Command::coeffs)
    bad("k-max must be smaller than n-pins for the Foldy solver");
}

}  // namespace plate
