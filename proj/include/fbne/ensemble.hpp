#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fbne/data_table.hpp"
#include "fbne/discretize.hpp"
#include "fbne/federation.hpp"
#include "fbne/learning.hpp"
#include "fbne/network.hpp"

namespace fbne {

struct LearningConfig {
  int max_parents = 3;
  double min_bin_fraction = 0.10;
  EmConfig em;
  // Majority voting instead of probability averaging; comparison aid
  // only.
  bool hard_voting = false;
  std::uint64_t seed = 0;
};

// One trained network plus everything needed to score a raw record:
// node i of `net` reads source table column source_cols[i], continuous
// values pass through `disc` first.
struct TrainedMember {
  BayesianNetwork net;
  std::vector<int> source_cols;
  DiscretizationSpec disc;
  int class_node = -1;
  int party_id = 0;
  double weight = 1.0;
  // Wall time spent in k2_search and in parameter fitting.
  double structure_seconds = 0.0;
  double parameter_seconds = 0.0;
};

struct EnsembleModel {
  std::vector<TrainedMember> members;
  std::string class_variable;
  std::vector<std::string> class_states;
  bool hard_voting = false;
};

struct BaselineSuite {
  std::vector<TrainedMember> local_models;  // one per party, FBNE-identical
  TrainedMember central_model;
  TrainedMember vertibayes_equivalent;
};

// One network per party: discretize the party's slice, K2 over its
// columns (class last in the ordering), then MLE — or EM when the slice
// has missing cells. Throws DegeneratePartyError if a party observes
// fewer than two class states.
EnsembleModel train_fbne(const DataTable& table,
                         const std::vector<PartyView>& parties,
                         const LearningConfig& cfg);

// A single model trained the same way on an arbitrary column/row slice;
// building block for members and baselines.
TrainedMember train_member(const DataTable& table,
                           const std::vector<int>& columns_class_last,
                           const std::vector<int>& rows, int party_id,
                           const LearningConfig& cfg);

// Posterior over the class states for one raw record, computed by one
// member. Missing and unknown values become non-evidence; a
// zero-probability evidence set falls back to the member's class prior.
std::vector<double> member_posterior(const TrainedMember& member,
                                     const DataTable& table, int row);

// Weighted soft-vote (or hard-vote) aggregate of the member posteriors,
// combined through a secure-sum round. Always a distribution.
std::vector<double> predict(const EnsembleModel& ensemble,
                            const DataTable& table, int row,
                            std::uint64_t mask_seed = 0);

// Argmax of predict; ties break toward the lower class index.
int classify(const EnsembleModel& ensemble, const DataTable& table, int row,
             std::uint64_t mask_seed = 0);

// Local models (= FBNE members), a centrally trained model on the
// pooled table, and the central model after the synthetic bootstrap
// when the table has missing cells.
BaselineSuite train_baselines(const DataTable& table,
                              const std::vector<PartyView>& parties,
                              const LearningConfig& cfg);

// Draw n complete records from `net` and refit its parameters on them,
// keeping the structure.
BayesianNetwork synthetic_bootstrap(const BayesianNetwork& net, int n,
                                    std::uint64_t seed);

}  // namespace fbne
