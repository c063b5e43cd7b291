#include "cdcheck/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cdcheck/numerics.hpp"

namespace cdcheck {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "pass";
    case Verdict::kFail: return "fail";
    case Verdict::kVacuous: return "vacuous";
  }
  return "unknown";
}

void finalize(CheckReport& report) {
  if (report.margins.empty()) {
    report.min_margin = std::numeric_limits<double>::infinity();
    report.verdict = Verdict::kVacuous;
    return;
  }
  bool has_nan = false;
  double lo = std::numeric_limits<double>::infinity();
  for (double m : report.margins) {
    if (std::isnan(m)) {
      has_nan = true;
      continue;
    }
    lo = std::min(lo, m);
  }
  report.min_margin = has_nan ? std::numeric_limits<double>::quiet_NaN() : lo;
  report.verdict = (!has_nan && lo >= -report.tolerance) ? Verdict::kPass : Verdict::kFail;
}

CheckReport make_report(std::string name, std::vector<double> margins,
                        double tolerance, std::uint64_t seed) {
  CheckReport r;
  r.name = std::move(name);
  r.margins = std::move(margins);
  r.tolerance = tolerance;
  r.seed = seed;
  finalize(r);
  return r;
}

CheckReport vacuous_report(std::string name, std::string reason) {
  CheckReport r;
  r.name = std::move(name);
  r.verdict = Verdict::kVacuous;
  r.min_margin = std::numeric_limits<double>::infinity();
  r.note = std::move(reason);
  return r;
}

namespace {

nlohmann::json number_or_string(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

nlohmann::json to_json(const CheckReport& report) {
  nlohmann::json margins = nlohmann::json::array();
  for (double m : report.margins) margins.push_back(number_or_string(m));
  nlohmann::json j = {
      {"name", report.name},
      {"samples", report.samples()},
      {"margins", std::move(margins)},
      {"min_margin", number_or_string(report.min_margin)},
      {"tolerance", report.tolerance},
      {"verdict", to_string(report.verdict)},
      {"seed", report.seed},
      {"provenance", report.provenance},
  };
  if (!report.note.empty()) j["note"] = report.note;
  if (!report.details.empty()) j["details"] = report.details;
  return j;
}

std::string report_hash(const CheckReport& report) {
  return fnv1a_hex(to_json(report).dump());
}

}  // namespace cdcheck
