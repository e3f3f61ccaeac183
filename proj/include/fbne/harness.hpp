#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbne/ensemble.hpp"
#include "fbne/evaluation.hpp"
#include "fbne/federation.hpp"

namespace fbne {

// Where a scenario's table comes from: a CSV on disk, the compiled-in
// chest-clinic network sampled at n, or an arbitrary BIF sampled at n.
struct DatasetSource {
  enum class Kind { kCsv, kBuiltinAsia, kBifSample };
  Kind kind = Kind::kCsv;
  std::string path;
  int n = 10000;
  std::uint64_t seed = 0;
  std::vector<std::string> force_categorical;
};

struct ScenarioConfig {
  std::string id;
  DatasetSource dataset;
  std::string class_column;
  SplitPlan split;
  double missing_level = 0.0;  // one of 0, 0.05, 0.1, 0.3
  int repeats = 10;
  int n_folds = 10;
  std::uint64_t seed = 1;
  LearningConfig learning;
  std::string output_dir;  // empty = no files written
};

// JSON schema documented in the README; unknown keys are rejected so
// typos fail loudly.
ScenarioConfig parse_scenario_json(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

struct ModelSummary {
  std::string model;
  std::vector<double> repeat_aucs;  // NaN where no fold defined an AUC
  double mean_auc = 0.0;
  double stddev_auc = 0.0;  // sample stddev over repeats, 0 if repeats == 1
  int excluded_folds = 0;   // summed over repeats
  double structure_seconds = 0.0;
  double parameter_seconds = 0.0;
  double prediction_seconds = 0.0;
};

struct ScenarioResult {
  std::string scenario_id;
  bool skipped = false;
  std::string skip_reason;
  std::vector<ModelSummary> models;
};

// Full pipeline: load/generate -> inject missing -> split -> K-fold CV
// per repeat -> aggregate. When output_dir is set, writes results.csv,
// summary.txt (best '*', second '†'), timings.csv and models/*.bif.
// results.csv, summary.txt and the models are byte-stable per config;
// timings.csv is wall-clock and is not.
ScenarioResult run_scenario(const ScenarioConfig& config);

struct GridOutcome {
  int executed = 0;
  int resumed = 0;  // cells skipped because their .done marker matched
  int skipped = 0;  // infeasible scenarios
};

// Cartesian sweep (datasets x splits x missing levels x biases for
// horizontal splits) with up to `jobs` cells in flight. Finished cells
// leave a content-hash marker and are never recomputed. Writes one
// summary-<dataset>.txt per dataset.
GridOutcome run_grid(const std::string& grid_config_path, int jobs);

// Resolves a data path: as given, else under $FBNE_FIXTURE_DIR, else
// under ./fixtures. Throws Error naming every location tried.
std::string resolve_data_path(const std::string& path);

DataTable load_dataset(const DatasetSource& source);

}  // namespace fbne
