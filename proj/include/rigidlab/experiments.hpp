#pragma once

#include <string>
#include <vector>

#include "rigidlab/config.hpp"

namespace rigidlab {

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 experiment failure, 2 config error
  std::vector<std::string> artifacts;
  std::string error;
};

// Dispatches the experiment and writes its artifacts under output_dir
// (overridden by output_override when non-empty). Module errors are caught
// and recorded both in the result and as error.json in the output directory.
RunResult run_experiment(const ExperimentConfig& cfg,
                         const std::string& output_override = "");

}  // namespace rigidlab
