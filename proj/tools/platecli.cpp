#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "plate/commands.hpp"

int main(int argc, char** argv) {
  using namespace plate;
  CLI::App app{"Flexural-wave scattering by pinned gratings and lattices"};
  std::string config_file;
  app.add_option("--config", config_file, "key = value run configuration file");
  // every config key doubles as a --key flag; flags win over the file
  std::map<std::string, std::string> flags;
  for (const std::string& k : setting_keys()) app.add_option("--" + k, flags[k], "config key '" + k + "'");
  app.add_option("--n", flags["n-pins"], "alias of --n-pins");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << error_record(ErrorCode::invalid_config, e.what()) << "\n";
    return 1;
  }
  RunConfig cfg;
  try {
    if (!config_file.empty()) apply_config_file(cfg, config_file);
    for (const std::string& k : setting_keys())
      if (app.count("--" + k) > 0 || (k == "n-pins" && app.count("--n") > 0)) apply_setting(cfg, k, flags[k]);
  } catch (const Error& e) {
    std::cerr << error_record(e.code(), e.what()) << "\n";
    return 1;
  }
  const RunResult r = run(cfg, std::cerr);
  for (const auto& f : r.files) std::cout << f << "\n";
  return r.status;
}
