#pragma once

#include <string>
#include <vector>

#include "emsnet/config.hpp"

namespace emsnet {

// Exit codes shared by the pipeline and the CLI wrapper.
enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitConfig = 3,
  kExitIo = 4,
  kExitParse = 5,
  kExitValidation = 6,
};

struct PipelineInputs {
  std::string nodes_path;
  std::string edges_path;
  std::string facilities_path;
  std::string tracts_path;
  std::string boundary_path;  // optional; default boundary when empty
  std::string trips_path;     // optional; enables the calibration artifact
};

struct PipelineOutcome {
  int exit_code = kExitOk;
  std::string error;                   // empty on success
  std::vector<std::string> artifacts;  // paths written, in order
  std::vector<std::string> warnings;
  std::string summary;                 // human-readable run recap
};

// Full run: build -> intersections -> density -> edge times -> snap ->
// field -> weights -> coverage -> vulnerability -> optional scenario and
// calibration, plus a run manifest. Catches library errors and maps them to
// exit codes; never throws.
PipelineOutcome run_pipeline(const RunConfig& config, const PipelineInputs& inputs,
                             const std::string& out_dir);

}  // namespace emsnet
