#pragma once

#include <filesystem>
#include <iosfwd>

#include "config.hpp"

namespace cdcheck::tools {

enum ExitCode : int { kExitPass = 0, kExitViolation = 1, kExitError = 2 };

struct RunOptions {
  std::filesystem::path config;
  Overrides overrides;
  bool quiet = false;
};

// Loads, resolves and runs a configuration, then writes report.json,
// margins.csv and the plot-data files into the output directory.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

// Schema check only.
int validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

}  // namespace cdcheck::tools
