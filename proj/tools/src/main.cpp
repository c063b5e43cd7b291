#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Numerical checks for curvature-dimension bounds on model spaces"};
  app.require_subcommand(1);

  cdcheck::tools::RunOptions run;
  std::uint64_t seed = 0;
  std::string out_dir;
  CLI::App* run_cmd = app.add_subcommand("run", "Run the suite named in a config file");
  run_cmd->add_option("--config", run.config, "Config JSON")->required();
  CLI::Option* seed_opt = run_cmd->add_option("--seed", seed, "Override sampling.seed");
  CLI::Option* out_opt = run_cmd->add_option("--out-dir", out_dir, "Override output.dir");
  run_cmd->add_flag("--quiet", run.quiet, "Print errors only");

  std::string validate_path;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a config file against the schema");
  validate_cmd->add_option("--config", validate_path, "Config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cdcheck::tools::kExitError;
  }

  if (*run_cmd) {
    if (*seed_opt) run.overrides.seed = seed;
    if (*out_opt) run.overrides.out_dir = out_dir;
    return cdcheck::tools::run(run, std::cout, std::cerr);
  }
  return cdcheck::tools::validate(validate_path, std::cout, std::cerr);
}
