#pragma once

// Scenario orchestration: runs one configured experiment, writes its CSV
// series, optional SLDN1 snapshots and a summary, and grades the run against
// the acceptance thresholds.
//
// Output directory layout:
//   series.csv          main time series (scenario specific columns)
//   <extra>.csv         secondary series (Ehrenfest, scaling, ...)
//   snapshots/*.sldn    field snapshots when snapshot_every > 0
//   summary.txt         resolved config, metrics and PASS/FAIL lines
//   manifest.txt        only after a solver failure: error and partial files

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pws/config.hpp"

namespace pws {

struct Criterion {
  std::string id;    // acceptance criterion label, e.g. "AC6"
  std::string name;  // measured quantity
  double value = 0.0;
  std::string op;    // "<", ">", ">=", "=="
  double threshold = 0.0;
  bool pass = false;
};

Criterion make_criterion(std::string id, std::string name, double value, std::string op, double threshold);

struct ScenarioResult {
  ScenarioKind kind = ScenarioKind::free_gausson;
  std::filesystem::path output_dir;
  std::vector<Criterion> criteria;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::filesystem::path> files;
  std::vector<std::string> warnings;
  double runtime_seconds = 0.0;

  bool passed() const;
  const Criterion* criterion(std::string_view name) const;
  double metric(std::string_view name) const;  // NaN when absent
};

// Raised when a solver aborts mid-run; the partial outputs and manifest.txt
// have been written by then.
class ScenarioAborted : public Error {
 public:
  ScenarioAborted(const std::string& what, std::filesystem::path manifest)
      : Error(what), manifest_(std::move(manifest)) {}
  const std::filesystem::path& manifest() const { return manifest_; }

 private:
  std::filesystem::path manifest_;
};

struct RunOptions {
  // Progress messages (nullptr for silence).
  std::ostream* log = nullptr;
};

ScenarioResult run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

// Process exit status for a finished run: 0 all criteria pass, 3 otherwise.
int exit_status(const ScenarioResult& result);

}  // namespace pws
