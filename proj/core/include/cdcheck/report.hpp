#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cdcheck {

enum class Verdict { kPass, kFail, kVacuous };

const char* to_string(Verdict v);

// Outcome of checking one named inequality over a set of samples. Margins are
// signed so that a sample satisfies the inequality iff margin >= -tolerance;
// checks with relative tolerances store margins already divided by their
// per-sample scale.
struct CheckReport {
  std::string name;
  std::vector<double> margins;
  double min_margin = 0.0;
  double tolerance = 0.0;
  Verdict verdict = Verdict::kVacuous;
  std::uint64_t seed = 0;
  std::string provenance;  // config hash, filled in by the suite runner
  std::string note;
  nlohmann::json details = nlohmann::json::object();

  std::size_t samples() const { return margins.size(); }
  bool passed() const { return verdict == Verdict::kPass; }
  bool failed() const { return verdict == Verdict::kFail; }
};

// Builds a report and derives min_margin / verdict. A NaN margin fails.
CheckReport make_report(std::string name, std::vector<double> margins,
                        double tolerance, std::uint64_t seed = 0);

// Report whose preconditions were not met; carries no verdict on the
// inequality itself.
CheckReport vacuous_report(std::string name, std::string reason);

// Recomputes min_margin and verdict from margins and tolerance.
void finalize(CheckReport& report);

nlohmann::json to_json(const CheckReport& report);

// Deterministic hash of the JSON form of a report.
std::string report_hash(const CheckReport& report);

}  // namespace cdcheck
