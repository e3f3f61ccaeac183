#include "fbne/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "fbne/bif.hpp"
#include "fbne/csv.hpp"
#include "fbne/errors.hpp"
#include "fbne/inference.hpp"
#include "fbne/missing.hpp"
#include "fbne/rng.hpp"

namespace fs = std::filesystem;

namespace fbne {

namespace {

using nlohmann::json;

constexpr double kMissingLevels[] = {0.0, 0.05, 0.1, 0.3};

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw Error(where + " must be a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (item.key() == a) {
        known = true;
        break;
      }
    }
    if (!known) throw Error("unknown key '" + item.key() + "' in " + where);
  }
}

DatasetSource parse_dataset(const json& j) {
  check_keys(j, "dataset",
             {"kind", "path", "n", "seed", "force_categorical"});
  DatasetSource src;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "csv") {
    src.kind = DatasetSource::Kind::kCsv;
  } else if (kind == "builtin-asia") {
    src.kind = DatasetSource::Kind::kBuiltinAsia;
  } else if (kind == "bif-sample") {
    src.kind = DatasetSource::Kind::kBifSample;
  } else {
    throw Error("unknown dataset kind '" + kind + "'");
  }
  if (j.contains("path")) src.path = j.at("path").get<std::string>();
  if (j.contains("n")) src.n = j.at("n").get<int>();
  if (j.contains("seed")) src.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("force_categorical")) {
    for (const auto& s : j.at("force_categorical")) {
      src.force_categorical.push_back(s.get<std::string>());
    }
  }
  if (src.kind != DatasetSource::Kind::kBuiltinAsia && src.path.empty()) {
    throw Error("dataset kind '" + kind + "' needs a path");
  }
  if (src.kind != DatasetSource::Kind::kCsv && src.n < 1) {
    throw Error("sampled datasets need n >= 1");
  }
  return src;
}

SplitPlan parse_split(const json& j) {
  check_keys(j, "split", {"kind", "parties", "bias", "biased_state",
                          "hybrid_mode", "manual_columns"});
  SplitPlan plan;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "vertical") {
    plan.kind = SplitKind::kVertical;
  } else if (kind == "horizontal") {
    plan.kind = SplitKind::kHorizontal;
  } else if (kind == "hybrid") {
    plan.kind = SplitKind::kHybrid;
  } else if (kind == "manual") {
    plan.kind = SplitKind::kManual;
  } else {
    throw Error("unknown split kind '" + kind + "'");
  }
  if (j.contains("parties")) plan.n_parties = j.at("parties").get<int>();
  if (j.contains("bias")) plan.bias = j.at("bias").get<double>();
  if (j.contains("biased_state")) {
    plan.biased_state = j.at("biased_state").get<int>();
  }
  if (j.contains("hybrid_mode")) {
    const std::string mode = j.at("hybrid_mode").get<std::string>();
    if (mode == "local-only") {
      plan.hybrid_mode = HybridMode::kLocalOnly;
    } else if (mode == "shared-overlap") {
      plan.hybrid_mode = HybridMode::kSharedOverlap;
    } else {
      throw Error("unknown hybrid_mode '" + mode + "'");
    }
  }
  if (j.contains("manual_columns")) {
    for (const auto& party : j.at("manual_columns")) {
      std::vector<std::string> cols;
      for (const auto& c : party) cols.push_back(c.get<std::string>());
      plan.manual_columns.push_back(std::move(cols));
    }
  }
  if (plan.kind == SplitKind::kManual && plan.manual_columns.empty()) {
    throw Error("manual split needs manual_columns");
  }
  return plan;
}

LearningConfig parse_learning(const json& j) {
  check_keys(j, "learning",
             {"max_parents", "min_bin_fraction", "em", "hard_voting"});
  LearningConfig cfg;
  if (j.contains("max_parents")) cfg.max_parents = j.at("max_parents").get<int>();
  if (j.contains("min_bin_fraction")) {
    cfg.min_bin_fraction = j.at("min_bin_fraction").get<double>();
  }
  if (j.contains("hard_voting")) {
    cfg.hard_voting = j.at("hard_voting").get<bool>();
  }
  if (j.contains("em")) {
    const json& em = j.at("em");
    check_keys(em, "learning.em",
               {"max_iterations", "tolerance", "seed", "random_restarts"});
    if (em.contains("max_iterations")) {
      cfg.em.max_iterations = em.at("max_iterations").get<int>();
    }
    if (em.contains("tolerance")) {
      cfg.em.log_likelihood_tolerance = em.at("tolerance").get<double>();
    }
    if (em.contains("seed")) cfg.em.seed = em.at("seed").get<std::uint64_t>();
    if (em.contains("random_restarts")) {
      cfg.em.random_restarts = em.at("random_restarts").get<int>();
    }
  }
  return cfg;
}

void validate_missing_level(double level) {
  for (double allowed : kMissingLevels) {
    if (std::fabs(level - allowed) < 1e-12) return;
  }
  throw Error("missing_level must be one of 0, 0.05, 0.1, 0.3");
}

ScenarioConfig parse_scenario(const json& j) {
  check_keys(j, "scenario config",
             {"id", "dataset", "class_column", "split", "missing_level",
              "repeats", "folds", "seed", "learning", "output_dir"});
  ScenarioConfig config;
  if (j.contains("id")) config.id = j.at("id").get<std::string>();
  config.dataset = parse_dataset(j.at("dataset"));
  config.class_column = j.at("class_column").get<std::string>();
  config.split = parse_split(j.at("split"));
  if (j.contains("missing_level")) {
    config.missing_level = j.at("missing_level").get<double>();
  }
  if (j.contains("repeats")) config.repeats = j.at("repeats").get<int>();
  if (j.contains("folds")) config.n_folds = j.at("folds").get<int>();
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("learning")) config.learning = parse_learning(j.at("learning"));
  if (j.contains("output_dir")) {
    config.output_dir = j.at("output_dir").get<std::string>();
  }
  validate_missing_level(config.missing_level);
  if (config.repeats < 1) throw Error("repeats must be >= 1");
  return config;
}

std::string format_fixed(double v, int digits) {
  if (std::isnan(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string format_compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string sanitize_csv_field(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

// Rank of each model by mean AUC: 0 = best, 1 = second best, else -1.
std::vector<int> podium(const std::vector<ModelSummary>& models) {
  std::vector<int> marks(models.size(), -1);
  int best = -1, second = -1;
  for (std::size_t i = 0; i < models.size(); ++i) {
    if (std::isnan(models[i].mean_auc)) continue;
    if (best < 0 || models[i].mean_auc > models[best].mean_auc) {
      second = best;
      best = static_cast<int>(i);
    } else if (second < 0 || models[i].mean_auc > models[second].mean_auc) {
      second = static_cast<int>(i);
    }
  }
  if (best >= 0) marks[best] = 0;
  if (second >= 0) marks[second] = 1;
  return marks;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
}

std::string results_csv(const ScenarioConfig& config,
                        const ScenarioResult& result) {
  std::ostringstream out;
  out << "scenario,model,mean_auc,stddev_auc,repeats,folds,missing_level,"
         "excluded_folds,status,reason\n";
  if (result.skipped) {
    out << result.scenario_id << ",,,," << config.repeats << ','
        << config.n_folds << ',' << format_compact(config.missing_level)
        << ",,skipped," << sanitize_csv_field(result.skip_reason) << '\n';
    return out.str();
  }
  for (const ModelSummary& m : result.models) {
    out << result.scenario_id << ',' << m.model << ','
        << format_fixed(m.mean_auc, 6) << ',' << format_fixed(m.stddev_auc, 6)
        << ',' << config.repeats << ',' << config.n_folds << ','
        << format_compact(config.missing_level) << ',' << m.excluded_folds
        << ",ok,\n";
  }
  return out.str();
}

std::string summary_text(const ScenarioConfig& config,
                         const ScenarioResult& result) {
  std::ostringstream out;
  out << "scenario: " << result.scenario_id << '\n';
  out << "missing level: " << format_compact(config.missing_level)
      << "  repeats: " << config.repeats << "  folds: " << config.n_folds
      << '\n';
  if (result.skipped) {
    out << "skipped: " << result.skip_reason << '\n';
    return out.str();
  }
  out << '\n';
  const std::vector<int> marks = podium(result.models);
  out << "  model                     mean AUC  stddev\n";
  for (std::size_t i = 0; i < result.models.size(); ++i) {
    const ModelSummary& m = result.models[i];
    const char* mark = marks[i] == 0 ? "*" : marks[i] == 1 ? "†" : " ";
    std::string name = m.model;
    if (name.size() < 24) name.resize(24, ' ');
    out << mark << ' ' << name << "  " << format_fixed(m.mean_auc, 6) << "  "
        << format_fixed(m.stddev_auc, 6);
    if (m.excluded_folds > 0) {
      out << "  (" << m.excluded_folds << " folds excluded)";
    }
    out << '\n';
  }
  out << "\n* best, † second best\n";
  return out.str();
}

std::string timings_csv(const ScenarioResult& result) {
  std::ostringstream out;
  out << "model,structure_seconds,parameter_seconds,prediction_seconds\n";
  for (const ModelSummary& m : result.models) {
    out << m.model << ',' << format_fixed(m.structure_seconds, 6) << ','
        << format_fixed(m.parameter_seconds, 6) << ','
        << format_fixed(m.prediction_seconds, 6) << '\n';
  }
  return out.str();
}

// Re-train on the complete table (no fold holdout) and export every
// member plus the central model for structure inspection.
void export_models(const ScenarioConfig& config, const DataTable& table,
                   int class_col, const fs::path& dir) {
  Rng rep_rng = Rng(config.seed).derive(0);
  DataTable injected = inject_missing(table, config.missing_level,
                                      rep_rng.derive(1).seed(), class_col);
  SplitPlan plan = config.split;
  plan.seed = rep_rng.derive(2).seed();
  const std::vector<PartyView> parties = make_split(injected, class_col, plan);
  const EnsembleModel ensemble =
      train_fbne(injected, parties, config.learning);

  fs::create_directories(dir);
  for (const TrainedMember& member : ensemble.members) {
    write_bif_file(member.net,
                   (dir / ("fbne-party-" + std::to_string(member.party_id + 1) +
                           ".bif"))
                       .string());
  }

  std::vector<int> cols;
  for (int c = 0; c < injected.n_cols(); ++c) {
    if (c != class_col) cols.push_back(c);
  }
  cols.push_back(class_col);
  std::vector<int> rows(injected.n_rows());
  for (int r = 0; r < injected.n_rows(); ++r) rows[r] = r;
  const TrainedMember central =
      train_member(injected, cols, rows, -1, config.learning);
  write_bif_file(central.net, (dir / "central.bif").string());
}

}  // namespace

ScenarioConfig parse_scenario_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_scenario(j);
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario_json(buffer.str());
}

std::string resolve_data_path(const std::string& path) {
  if (fs::exists(path)) return path;
  std::vector<std::string> tried{path};
  std::vector<fs::path> bases;
  if (const char* env = std::getenv("FBNE_FIXTURE_DIR"); env && *env) {
    bases.emplace_back(env);
  }
  bases.emplace_back("fixtures");
  for (const fs::path& base : bases) {
    const fs::path candidate = base / path;
    if (fs::exists(candidate)) return candidate.string();
    tried.push_back(candidate.string());
  }
  std::string msg = "data file not found; tried:";
  for (const std::string& t : tried) msg += " " + t;
  throw Error(msg);
}

DataTable load_dataset(const DatasetSource& source) {
  switch (source.kind) {
    case DatasetSource::Kind::kCsv: {
      SchemaHints hints;
      hints.force_categorical.insert(source.force_categorical.begin(),
                                     source.force_categorical.end());
      return load_csv(resolve_data_path(source.path), hints);
    }
    case DatasetSource::Kind::kBuiltinAsia:
      return forward_sample(builtin_asia(), source.n, source.seed);
    case DatasetSource::Kind::kBifSample:
      return forward_sample(load_bif(resolve_data_path(source.path)), source.n,
                            source.seed);
  }
  throw Error("unknown dataset kind");
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  validate_missing_level(config.missing_level);
  if (config.repeats < 1) throw Error("repeats must be >= 1");

  ScenarioResult result;
  result.scenario_id = config.id.empty() ? "scenario" : config.id;

  const DataTable raw = load_dataset(config.dataset);
  const int class_col = raw.column_index(config.class_column);
  if (class_col < 0) {
    throw Error("class column '" + config.class_column +
                "' not found in the dataset");
  }

  try {
    for (int rep = 0; rep < config.repeats; ++rep) {
      Rng rep_rng = Rng(config.seed).derive(rep);
      const DataTable injected =
          inject_missing(raw, config.missing_level,
                         rep_rng.derive(1).seed(), class_col);
      SplitPlan plan = config.split;
      plan.seed = rep_rng.derive(2).seed();
      const std::vector<PartyView> parties =
          make_split(injected, class_col, plan);

      CvSpec cv;
      cv.n_folds = config.n_folds;
      cv.seed = rep_rng.derive(3).seed();
      const std::vector<ResultRecord> records =
          cross_validate(injected, class_col, parties, config.learning, cv);

      if (rep == 0) {
        for (const ResultRecord& r : records) {
          ModelSummary m;
          m.model = r.model;
          result.models.push_back(std::move(m));
        }
      }
      if (records.size() != result.models.size()) {
        throw Error("model set changed across repeats");
      }
      for (std::size_t i = 0; i < records.size(); ++i) {
        ModelSummary& m = result.models[i];
        m.repeat_aucs.push_back(records[i].auc);
        m.excluded_folds += records[i].excluded_folds;
        m.structure_seconds += records[i].structure_seconds;
        m.parameter_seconds += records[i].parameter_seconds;
        m.prediction_seconds += records[i].prediction_seconds;
      }
    }
  } catch (const InfeasibleSplitError& e) {
    result.skipped = true;
    result.skip_reason = e.what();
    result.models.clear();
  } catch (const DegeneratePartyError& e) {
    result.skipped = true;
    result.skip_reason = e.what();
    result.models.clear();
  }

  for (ModelSummary& m : result.models) {
    std::vector<double> defined;
    for (double v : m.repeat_aucs) {
      if (!std::isnan(v)) defined.push_back(v);
    }
    if (defined.empty()) {
      m.mean_auc = std::numeric_limits<double>::quiet_NaN();
      m.stddev_auc = 0.0;
      continue;
    }
    double sum = 0.0;
    for (double v : defined) sum += v;
    m.mean_auc = sum / static_cast<double>(defined.size());
    if (defined.size() > 1) {
      double ss = 0.0;
      for (double v : defined) ss += (v - m.mean_auc) * (v - m.mean_auc);
      m.stddev_auc = std::sqrt(ss / static_cast<double>(defined.size() - 1));
    }
  }

  if (!config.output_dir.empty()) {
    fs::create_directories(config.output_dir);
    const fs::path dir(config.output_dir);
    write_text_file(dir / "results.csv", results_csv(config, result));
    write_text_file(dir / "summary.txt", summary_text(config, result));
    if (!result.skipped) {
      write_text_file(dir / "timings.csv", timings_csv(result));
      export_models(config, raw, class_col, dir / "models");
    }
  }
  return result;
}

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

json dataset_to_json(const DatasetSource& src) {
  json j;
  switch (src.kind) {
    case DatasetSource::Kind::kCsv:
      j["kind"] = "csv";
      break;
    case DatasetSource::Kind::kBuiltinAsia:
      j["kind"] = "builtin-asia";
      break;
    case DatasetSource::Kind::kBifSample:
      j["kind"] = "bif-sample";
      break;
  }
  if (!src.path.empty()) j["path"] = src.path;
  j["n"] = src.n;
  j["seed"] = src.seed;
  if (!src.force_categorical.empty()) {
    j["force_categorical"] = src.force_categorical;
  }
  return j;
}

json split_to_json(const SplitPlan& plan) {
  json j;
  switch (plan.kind) {
    case SplitKind::kVertical:
      j["kind"] = "vertical";
      break;
    case SplitKind::kHorizontal:
      j["kind"] = "horizontal";
      break;
    case SplitKind::kHybrid:
      j["kind"] = "hybrid";
      break;
    case SplitKind::kManual:
      j["kind"] = "manual";
      break;
  }
  j["parties"] = plan.n_parties;
  j["bias"] = plan.bias;
  j["biased_state"] = plan.biased_state;
  j["hybrid_mode"] = plan.hybrid_mode == HybridMode::kLocalOnly
                         ? "local-only"
                         : "shared-overlap";
  if (!plan.manual_columns.empty()) j["manual_columns"] = plan.manual_columns;
  return j;
}

// Canonical dump used for the resume marker; nlohmann objects dump with
// sorted keys, so equal configs hash equal.
std::string cell_fingerprint(const ScenarioConfig& config) {
  json j;
  j["id"] = config.id;
  j["dataset"] = dataset_to_json(config.dataset);
  j["class_column"] = config.class_column;
  j["split"] = split_to_json(config.split);
  j["missing_level"] = config.missing_level;
  j["repeats"] = config.repeats;
  j["folds"] = config.n_folds;
  j["seed"] = config.seed;
  j["learning"] = {{"max_parents", config.learning.max_parents},
                   {"min_bin_fraction", config.learning.min_bin_fraction},
                   {"hard_voting", config.learning.hard_voting},
                   {"em",
                    {{"max_iterations", config.learning.em.max_iterations},
                     {"tolerance",
                      config.learning.em.log_likelihood_tolerance},
                     {"seed", config.learning.em.seed},
                     {"random_restarts",
                      config.learning.em.random_restarts}}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

std::string split_slug(const SplitPlan& plan) {
  switch (plan.kind) {
    case SplitKind::kVertical:
      return "vertical" + std::to_string(plan.n_parties) + "p";
    case SplitKind::kHorizontal:
      return "horizontal" + std::to_string(plan.n_parties) + "p-b" +
             format_compact(plan.bias);
    case SplitKind::kHybrid:
      return plan.hybrid_mode == HybridMode::kLocalOnly ? "hybrid-local"
                                                        : "hybrid-shared";
    case SplitKind::kManual:
      return "manual";
  }
  return "unknown";
}

struct GridCell {
  ScenarioConfig config;
  std::string dataset_name;
};

}  // namespace

GridOutcome run_grid(const std::string& grid_config_path, int jobs) {
  std::ifstream in(grid_config_path);
  if (!in) throw Error("cannot open config " + grid_config_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  json g;
  try {
    g = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw Error(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(g, "grid config",
             {"output_dir", "repeats", "folds", "seed", "learning", "datasets",
              "splits", "missing_levels", "biases"});
  const std::string output_dir = g.at("output_dir").get<std::string>();
  const int repeats = g.contains("repeats") ? g.at("repeats").get<int>() : 10;
  const int folds = g.contains("folds") ? g.at("folds").get<int>() : 10;
  const std::uint64_t seed =
      g.contains("seed") ? g.at("seed").get<std::uint64_t>() : 1;
  const LearningConfig learning =
      g.contains("learning") ? parse_learning(g.at("learning"))
                             : LearningConfig{};
  std::vector<double> levels{0.0};
  if (g.contains("missing_levels")) {
    levels.clear();
    for (const auto& v : g.at("missing_levels")) {
      levels.push_back(v.get<double>());
    }
  }
  for (double level : levels) validate_missing_level(level);
  std::vector<double> biases{0.5};
  if (g.contains("biases")) {
    biases.clear();
    for (const auto& v : g.at("biases")) biases.push_back(v.get<double>());
  }

  std::vector<GridCell> cells;
  for (const json& ds : g.at("datasets")) {
    check_keys(ds, "datasets entry", {"name", "dataset", "class_column"});
    const std::string name = ds.at("name").get<std::string>();
    const DatasetSource source = parse_dataset(ds.at("dataset"));
    const std::string class_column = ds.at("class_column").get<std::string>();
    for (const json& sp : g.at("splits")) {
      const SplitPlan base_plan = parse_split(sp);
      const bool horizontal = base_plan.kind == SplitKind::kHorizontal;
      const std::vector<double> cell_biases =
          horizontal ? biases : std::vector<double>{base_plan.bias};
      for (double bias : cell_biases) {
        for (double level : levels) {
          GridCell cell;
          cell.dataset_name = name;
          cell.config.dataset = source;
          cell.config.class_column = class_column;
          cell.config.split = base_plan;
          cell.config.split.bias = bias;
          cell.config.missing_level = level;
          cell.config.repeats = repeats;
          cell.config.n_folds = folds;
          cell.config.seed = seed;
          cell.config.learning = learning;
          cell.config.id = name + "-" + split_slug(cell.config.split) + "-m" +
                           format_compact(level);
          cell.config.output_dir =
              (fs::path(output_dir) / cell.config.id).string();
          cells.push_back(std::move(cell));
        }
      }
    }
  }

  GridOutcome outcome;
  std::mutex state_mutex;
  std::atomic<std::size_t> next{0};
  std::vector<std::string> failures;

  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const GridCell& cell = cells[i];
      const fs::path marker = fs::path(cell.config.output_dir) / ".done";
      const std::string fingerprint = cell_fingerprint(cell.config);
      std::error_code ec;
      if (fs::exists(marker, ec)) {
        std::ifstream m(marker);
        std::string prev;
        m >> prev;
        if (prev == fingerprint) {
          std::lock_guard<std::mutex> lock(state_mutex);
          ++outcome.resumed;
          continue;
        }
      }
      try {
        const ScenarioResult result = run_scenario(cell.config);
        write_text_file(marker, fingerprint + "\n");
        std::lock_guard<std::mutex> lock(state_mutex);
        if (result.skipped) {
          ++outcome.skipped;
        } else {
          ++outcome.executed;
        }
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(state_mutex);
        failures.push_back(cell.config.id + ": " + e.what());
      }
    }
  };

  const int n_threads =
      std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  if (!failures.empty()) {
    std::string msg = "grid cells failed:";
    for (const std::string& f : failures) msg += "\n  " + f;
    throw Error(msg);
  }

  // Per-dataset digest: concatenate the cells' summaries in grid order.
  std::map<std::string, std::string> digests;
  for (const GridCell& cell : cells) {
    std::ifstream s(fs::path(cell.config.output_dir) / "summary.txt");
    if (!s) continue;
    std::stringstream body;
    body << s.rdbuf();
    digests[cell.dataset_name] +=
        body.str() + "----------------------------------------\n";
  }
  for (const auto& [name, body] : digests) {
    write_text_file(fs::path(output_dir) / ("summary-" + name + ".txt"),
                    body);
  }
  return outcome;
}

}  // namespace fbne
