#pragma once

#include <string>
#include <vector>

#include "cdcheck/report.hpp"
#include "config.hpp"

namespace cdcheck::tools {

// Plot-data file produced next to the report.
struct Artifact {
  std::string file;
  std::string content;
};

struct SuiteOutput {
  std::vector<CheckReport> reports;
  std::vector<Artifact> artifacts;
};

// Runs every suite of the setting in order. Library errors propagate.
// Checks whose curvature or functional hypotheses fail on the sampled
// region come back vacuous, except the Jacobian suite, which switches to a
// search for counterexamples.
SuiteOutput run_suites(const Setting& setting);

}  // namespace cdcheck::tools
