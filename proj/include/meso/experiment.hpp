#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "meso/boruta.hpp"
#include "meso/dataset.hpp"
#include "meso/harness.hpp"
#include "meso/metrics.hpp"

namespace meso {

struct ExperimentConfig {
  std::string data_path;
  Phase phase = Phase::Phase1;
  std::vector<std::string> models;  // empty = full roster
  std::size_t k = 10;
  std::uint64_t seed = 1;
  double alpha = 0.05;
  std::map<std::string, std::string> params;  // dotted per-model overrides
  std::string out_dir = "out";
  bool per_fold_selection = false;
  std::string class_column = "class of diagnosis";
  std::vector<std::string> nominal_columns;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Reads key=value lines ('#' comments); dotted keys land in params.
/// Values already present in `cfg` are overwritten (CLI flags are applied
/// afterwards and win).
void apply_config_file(ExperimentConfig& cfg, const std::string& path);
void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value);

/// FNV-1a over the canonical serialization; changes iff any field changes.
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct RunReport {
  std::vector<EvalReport> reports;             // one per roster model
  std::vector<std::vector<TTestResult>> ttest; // [i][j] = model_i vs model_j
  std::vector<std::string> boruta_whitelist;   // phase 2 only
  BorutaResult boruta;                         // phase 2, whole-data mode
  bool boruta_ran = false;
  int positive_label = 1;
  std::uint64_t seed = 0;
  std::uint64_t config_fingerprint = 0;
  std::string timestamp;
  std::vector<std::string> warnings;
};

/// Full two-phase protocol on an already-loaded dataset:
/// impute -> phase filter -> (phase 2: all-relevant selection) ->
/// cross-validate every roster model -> pairwise corrected t-tests.
RunReport run_experiment_on(const Dataset& raw, const ExperimentConfig& cfg);

/// Loads cfg.data_path and runs run_experiment_on.
RunReport run_experiment(const ExperimentConfig& cfg);

/// Writes report.md, report.csv, ttest.csv, provenance.txt and (phase 2)
/// boruta.csv under out_dir. report.csv and ttest.csv are byte-stable
/// across identical runs; the timestamp lives only in provenance.txt.
void emit_report(const RunReport& report, const ExperimentConfig& cfg,
                 const std::string& out_dir);

}  // namespace meso
