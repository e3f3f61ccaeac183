#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbne/data_table.hpp"
#include "fbne/ensemble.hpp"
#include "fbne/federation.hpp"

namespace fbne {

// Row-to-fold assignment, stratified by class: fold sizes differ by at
// most one, and each fold's per-class count is within one record of
// proportional.
struct FoldPlan {
  int n_folds = 10;
  std::vector<int> assignments;  // row -> fold index
  std::uint64_t seed = 0;
};

FoldPlan make_folds(const DataTable& table, int class_column, int n_folds,
                    std::uint64_t seed);

// Tie-corrected Mann-Whitney AUC from P(label 1) scores and 0/1 labels.
// Throws InvalidQueryError unless both labels occur.
double auc_binary(const std::vector<double>& scores,
                  const std::vector<int>& labels);

// Unweighted macro one-vs-rest AUC over class-probability vectors.
// Classes absent (or exhaustive) in `labels` are skipped with a warning
// appended to `warnings`; empty optional when nothing is defined.
std::optional<double> auc_macro(const std::vector<std::vector<double>>& scores,
                                const std::vector<int>& labels, int n_classes,
                                std::vector<std::string>* warnings = nullptr);

struct CvSpec {
  int n_folds = 10;
  std::uint64_t seed = 0;
  bool keep_scores = false;  // retain per-row score vectors on records
};

struct ResultRecord {
  std::string scenario_id;
  std::string model;  // fbne | party-k | central | vertibayes-equivalent
  double auc = 0.0;   // mean of the defined per-fold AUCs
  std::vector<double> fold_aucs;  // defined folds only
  int excluded_folds = 0;
  std::vector<std::string> warnings;
  double structure_seconds = 0.0;
  double parameter_seconds = 0.0;
  double prediction_seconds = 0.0;
  // (row, class-probability vector) pairs, only when CvSpec.keep_scores.
  std::vector<std::pair<int, std::vector<double>>> scores;
};

// One stratified K-fold pass: per fold, restrict every party to the
// training rows, train the ensemble and the baseline suite, score the
// test rows, and compute per-model AUCs. Record order: fbne, party-k
// for each party, central, vertibayes-equivalent.
std::vector<ResultRecord> cross_validate(const DataTable& table,
                                         int class_column,
                                         const std::vector<PartyView>& parties,
                                         const LearningConfig& cfg,
                                         const CvSpec& cv);

}  // namespace fbne
