#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdcheck/model_space.hpp"
#include "cdcheck/params.hpp"
#include "cdcheck/weight.hpp"

namespace cdcheck::tools {

// JSON Schema (draft-04) of suite configurations, embedded at build time.
extern const char* const kConfigSchema;

// Parses config text and checks it against kConfigSchema. ConfigError names
// the failing location and keyword.
nlohmann::json parse_config(const std::string& text);
nlohmann::json load_config(const std::filesystem::path& path);

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
};

// Fully resolved configuration. `config` holds every default materialized
// and is what reports carry for provenance.
struct Setting {
  nlohmann::json config;
  std::filesystem::path base_dir;  // csv paths are relative to the config file
  ModelSpace space;
  WeightFunction weight;
  DimensionParams params;
  double kappa = 0.0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<double> t_grid;

  const std::string& suite() const { return config.at("suite").get_ref<const std::string&>(); }
  // Suites run by this configuration; "all" expands to the ones with enough
  // information to run.
  std::vector<std::string> suites() const;
  double tolerance(const std::string& report_name) const;
  bool has(const std::string& block) const { return config.contains(block); }
  const nlohmann::json& block(const std::string& name) const { return config.at(name); }
};

// Materializes defaults and checks everything the schema cannot express.
// Throws the library error matching the first problem found.
Setting resolve(const nlohmann::json& config, const std::filesystem::path& base_dir,
                const Overrides& overrides = {});

// Hash of the resolved config without its output block.
std::string config_hash(const nlohmann::json& resolved);

Point to_point(const nlohmann::json& v);

}  // namespace cdcheck::tools
