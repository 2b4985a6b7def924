#pragma once
#include <ostream>
#include <string>
#include <vector>

#include "plate/runconfig.hpp"

namespace plate {

struct RunResult {
  int status = 0;                   // 0 ok, 1 invalid config, 2 solver error, 3 ill-conditioned
  std::vector<std::string> files;   // artifacts written, in order
};

// Validates cfg, runs the command and writes CSV/JSON artifacts under
// cfg.out. Failures are reported as one JSON error record on err.
RunResult run(const RunConfig& cfg, std::ostream& err);

// {"error": {"code": ..., "message": ...}} on one line.
std::string error_record(ErrorCode code, const std::string& message);

}  // namespace plate
