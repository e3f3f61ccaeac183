#include "fbne/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>

#include "fbne/errors.hpp"
#include "fbne/rng.hpp"

namespace fbne {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

FoldPlan make_folds(const DataTable& table, int class_column, int n_folds,
                    std::uint64_t seed) {
  if (class_column < 0 || class_column >= table.n_cols()) {
    throw Error("class column index out of range");
  }
  if (table.column(class_column).continuous) {
    throw Error("class column must be categorical");
  }
  if (n_folds < 2 || n_folds > table.n_rows()) {
    throw Error("fold count must lie in [2, n_rows]");
  }

  // Shuffle within each class, then deal all classes through one
  // continuous round-robin pointer: fold sizes stay within 1 of each
  // other overall AND per class.
  std::map<int, std::vector<int>> by_class;
  for (int r = 0; r < table.n_rows(); ++r) {
    by_class[table.code(r, class_column)].push_back(r);
  }
  Rng rng(seed);
  FoldPlan plan;
  plan.n_folds = n_folds;
  plan.seed = seed;
  plan.assignments.assign(table.n_rows(), 0);
  int pointer = 0;
  for (auto& [code, rows] : by_class) {
    rng.shuffle(rows);
    for (int r : rows) {
      plan.assignments[r] = pointer % n_folds;
      ++pointer;
    }
  }
  return plan;
}

double auc_binary(const std::vector<double>& scores,
                  const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw InvalidQueryError("scores and labels must align and be non-empty");
  }
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw InvalidQueryError("labels must be 0 or 1");
    n_pos += y;
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw InvalidQueryError("AUC needs both a positive and a negative");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  // Midranks over tied scores, 1-based.
  double positive_rank_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = (static_cast<double>(i + 1) + j) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) positive_rank_sum += midrank;
    }
    i = j;
  }
  const double u = positive_rank_sum -
                   static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

std::optional<double> auc_macro(const std::vector<std::vector<double>>& scores,
                                const std::vector<int>& labels, int n_classes,
                                std::vector<std::string>* warnings) {
  if (scores.size() != labels.size() || scores.empty()) {
    throw InvalidQueryError("scores and labels must align and be non-empty");
  }
  if (n_classes < 2) throw InvalidQueryError("need at least 2 classes");
  for (const auto& row : scores) {
    if (static_cast<int>(row.size()) != n_classes) {
      throw InvalidQueryError("score vectors must have one entry per class");
    }
  }

  double sum = 0.0;
  int defined = 0;
  for (int c = 0; c < n_classes; ++c) {
    std::vector<double> class_scores(scores.size());
    std::vector<int> class_labels(scores.size());
    int positives = 0;
    for (std::size_t r = 0; r < scores.size(); ++r) {
      class_scores[r] = scores[r][c];
      class_labels[r] = labels[r] == c ? 1 : 0;
      positives += class_labels[r];
    }
    if (positives == 0 || positives == static_cast<int>(scores.size())) {
      if (warnings) {
        warnings->push_back("class " + std::to_string(c) +
                            " is single-valued here; one-vs-rest AUC skipped");
      }
      continue;
    }
    sum += auc_binary(class_scores, class_labels);
    ++defined;
  }
  if (defined == 0) {
    if (warnings) {
      warnings->push_back("no class pairing defines an AUC; fold excluded");
    }
    return std::nullopt;
  }
  return sum / defined;
}

std::vector<ResultRecord> cross_validate(const DataTable& table,
                                         int class_column,
                                         const std::vector<PartyView>& parties,
                                         const LearningConfig& cfg,
                                         const CvSpec& cv) {
  if (parties.empty()) throw Error("no parties to evaluate");
  const FoldPlan folds = make_folds(table, class_column, cv.n_folds, cv.seed);
  const int n_classes = table.column(class_column).var.cardinality();

  std::vector<ResultRecord> records(parties.size() + 3);
  records[0].model = "fbne";
  for (std::size_t p = 0; p < parties.size(); ++p) {
    records[1 + p].model =
        "party-" + std::to_string(parties[p].party_id + 1);
  }
  records[parties.size() + 1].model = "central";
  records[parties.size() + 2].model = "vertibayes-equivalent";

  for (int fold = 0; fold < folds.n_folds; ++fold) {
    std::vector<PartyView> fold_parties = parties;
    for (PartyView& party : fold_parties) {
      std::vector<int> keep;
      for (int r : party.train_rows) {
        if (folds.assignments[r] != fold) keep.push_back(r);
      }
      party.train_rows = std::move(keep);
      std::vector<int> local;
      for (int r : party.local_rows) {
        if (folds.assignments[r] != fold) local.push_back(r);
      }
      party.local_rows = std::move(local);
    }

    const EnsembleModel ensemble = train_fbne(table, fold_parties, cfg);
    const BaselineSuite suite = train_baselines(table, fold_parties, cfg);

    for (const TrainedMember& member : ensemble.members) {
      records[0].structure_seconds += member.structure_seconds;
      records[0].parameter_seconds += member.parameter_seconds;
    }
    for (std::size_t p = 0; p < parties.size(); ++p) {
      records[1 + p].structure_seconds +=
          suite.local_models[p].structure_seconds;
      records[1 + p].parameter_seconds +=
          suite.local_models[p].parameter_seconds;
    }
    records[parties.size() + 1].structure_seconds +=
        suite.central_model.structure_seconds;
    records[parties.size() + 1].parameter_seconds +=
        suite.central_model.parameter_seconds;
    records[parties.size() + 2].structure_seconds +=
        suite.vertibayes_equivalent.structure_seconds;
    records[parties.size() + 2].parameter_seconds +=
        suite.vertibayes_equivalent.parameter_seconds;

    std::vector<int> test_rows;
    for (int r = 0; r < table.n_rows(); ++r) {
      if (folds.assignments[r] == fold) test_rows.push_back(r);
    }
    std::vector<int> labels;
    labels.reserve(test_rows.size());
    for (int r : test_rows) labels.push_back(table.code(r, class_column));

    const auto score_model =
        [&](ResultRecord& record,
            const std::function<std::vector<double>(int)>& scorer) {
          const auto mark = std::chrono::steady_clock::now();
          std::vector<std::vector<double>> scores;
          scores.reserve(test_rows.size());
          for (int r : test_rows) scores.push_back(scorer(r));
          record.prediction_seconds += seconds_since(mark);

          const std::optional<double> value =
              auc_macro(scores, labels, n_classes, &record.warnings);
          if (value) {
            record.fold_aucs.push_back(*value);
          } else {
            ++record.excluded_folds;
          }
          if (cv.keep_scores) {
            for (std::size_t i = 0; i < test_rows.size(); ++i) {
              record.scores.emplace_back(test_rows[i], std::move(scores[i]));
            }
          }
        };

    score_model(records[0], [&](int r) {
      return predict(ensemble, table, r, cv.seed);
    });
    for (std::size_t p = 0; p < parties.size(); ++p) {
      score_model(records[1 + p], [&](int r) {
        return member_posterior(suite.local_models[p], table, r);
      });
    }
    score_model(records[parties.size() + 1], [&](int r) {
      return member_posterior(suite.central_model, table, r);
    });
    score_model(records[parties.size() + 2], [&](int r) {
      return member_posterior(suite.vertibayes_equivalent, table, r);
    });
  }

  for (ResultRecord& record : records) {
    if (record.fold_aucs.empty()) {
      record.auc = std::numeric_limits<double>::quiet_NaN();
    } else {
      record.auc =
          std::accumulate(record.fold_aucs.begin(), record.fold_aucs.end(),
                          0.0) /
          static_cast<double>(record.fold_aucs.size());
    }
  }
  return records;
}

}  // namespace fbne
