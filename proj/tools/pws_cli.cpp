// Command-line front end.
//
//   pws run <config> [--output-dir DIR] [--snapshots K] [--seed S] [--quiet]
//   pws validate <config>
//   pws list-scenarios
//
// Exit status: 0 pass, 1 solver error, 2 config error, 3 acceptance FAIL.

#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "pws/config.hpp"
#include "pws/scenario.hpp"

namespace {

constexpr int kSolverError = 1;
constexpr int kConfigError = 2;

int run(const std::string& path, const std::optional<std::string>& out_dir, const std::optional<std::uint64_t>& every,
        const std::optional<std::uint64_t>& seed, bool quiet) {
  pws::ScenarioConfig cfg;
  try {
    cfg = pws::parse_config(path);
    if (out_dir) cfg.output_dir = *out_dir;
    if (every) cfg.snapshot_every = *every;
    if (seed) cfg.seed = *seed;
    pws::validate_config(cfg);
  } catch (const pws::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    pws::RunOptions opt;
    if (!quiet) opt.log = &std::cerr;
    const pws::ScenarioResult res = pws::run_scenario(cfg, opt);
    if (!quiet) {
      for (const auto& c : res.criteria) {
        std::cout << c.id << " " << c.name << " = " << c.value << " " << c.op << " " << c.threshold << " : "
                  << (c.pass ? "PASS" : "FAIL") << "\n";
      }
      std::cout << (res.passed() ? "PASS" : "FAIL") << " (" << cfg.output_dir << "/summary.txt)\n";
    }
    return pws::exit_status(res);
  } catch (const pws::ScenarioAborted& e) {
    std::cerr << "solver error: " << e.what() << "\npartial output manifest: " << e.manifest().string() << "\n";
    return kSolverError;
  } catch (const pws::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolverError;
  }
}

int validate(const std::string& path) {
  try {
    const pws::ScenarioConfig cfg = pws::parse_config(path);
    std::cout << pws::render_config(cfg);
    return 0;
  } catch (const pws::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Double-solution pilot-wave simulator"};
  app.require_subcommand(1);

  std::string run_path;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> every, seed;
  bool quiet = false;
  auto* run_cmd = app.add_subcommand("run", "run a scenario config");
  run_cmd->add_option("config", run_path, "config file")->required();
  run_cmd->add_option("--output-dir", out_dir, "override the output directory");
  run_cmd->add_option("--snapshots", every, "write field snapshots every K steps");
  run_cmd->add_option("--seed", seed, "override the random seed");
  run_cmd->add_flag("--quiet", quiet, "no progress or summary on the terminal");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "check a config and print the resolved values");
  validate_cmd->add_option("config", validate_path, "config file")->required();

  auto* list_cmd = app.add_subcommand("list-scenarios", "list scenario kinds and the config schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  if (*run_cmd) return run(run_path, out_dir, every, seed, quiet);
  if (*validate_cmd) return validate(validate_path);
  if (*list_cmd) {
    for (const auto kind : pws::all_scenarios()) {
      std::cout << pws::scenario_name(kind) << "\t" << pws::scenario_description(kind) << "\n";
    }
    std::cout << "\n" << pws::schema_reference();
    return 0;
  }
  return kConfigError;
}
