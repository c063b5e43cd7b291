#include "runner.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "cdcheck/errors.hpp"
#include "cdcheck/numerics.hpp"
#include "suites.hpp"

namespace cdcheck::tools {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  os << content;
  if (!os) throw std::runtime_error("cannot write " + path.string());
}

// Everything except the timestamp and the output location enters the hash.
json report_document(const Setting& s, const std::vector<CheckReport>& reports, int code, const json& error) {
  json doc;
  doc["tool"] = "cdcheck";
  doc["version"] = kVersion;
  doc["config"] = s.config;
  doc["reports"] = json::array();
  for (const CheckReport& r : reports) doc["reports"].push_back(to_json(r));
  if (!error.is_null()) doc["error"] = error;
  doc["exit_code"] = code;
  json hashed = doc;
  hashed["config"].erase("output");
  doc["report_hash"] = fnv1a_hex(hashed.dump());
  doc["timestamp"] = utc_timestamp();
  return doc;
}

std::string margins_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << "report,index,margin\n";
  os.precision(17);
  for (std::size_t k = 0; k < reports.size(); ++k) {
    for (std::size_t i = 0; i < reports[k].margins.size(); ++i) {
      os << reports[k].name << '#' << k << ',' << i << ',' << reports[k].margins[i] << '\n';
    }
  }
  return os.str();
}

void emit(const Setting& s, const json& doc, const SuiteOutput* output) {
  const std::filesystem::path dir = s.config["output"]["dir"].get<std::string>();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  write_file(dir / "report.json", doc.dump(2) + "\n");
  if (!output) return;
  write_file(dir / "margins.csv", margins_csv(output->reports));
  for (const Artifact& a : output->artifacts) write_file(dir / a.file, a.content);
}

void summarize(std::ostream& out, const CheckReport& r) {
  static const char* label[] = {"PASS", "FAIL", "VACUOUS"};
  out << std::left << std::setw(8) << label[static_cast<int>(r.verdict)] << std::setw(24) << r.name;
  if (r.verdict == Verdict::kVacuous) {
    out << r.note << '\n';
    return;
  }
  out << "samples=" << r.samples() << " min_margin=" << std::setprecision(6) << r.min_margin
      << " tol=" << r.tolerance << '\n';
}

}  // namespace

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  std::optional<Setting> setting;
  try {
    const json cfg = load_config(options.config);
    setting = resolve(cfg, options.config.parent_path(), options.overrides);
    const SuiteOutput output = run_suites(*setting);
    bool violated = false;
    for (const CheckReport& r : output.reports) violated = violated || r.failed();
    const int code = violated ? kExitViolation : kExitPass;
    emit(*setting, report_document(*setting, output.reports, code, nullptr), &output);
    if (!options.quiet) {
      for (const CheckReport& r : output.reports) summarize(out, r);
      out << "report: " << (std::filesystem::path(setting->config["output"]["dir"].get<std::string>()) / "report.json").string()
          << '\n';
    }
    return code;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    if (setting) {
      try {
        emit(*setting, report_document(*setting, {}, kExitError, {{"kind", e.kind()}, {"message", e.what()}}), nullptr);
      } catch (const std::exception& io) {
        err << "error: " << io.what() << '\n';
      }
    }
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int validate(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  try {
    load_config(config);
    out << config.string() << ": valid\n";
    return kExitPass;
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace cdcheck::tools
