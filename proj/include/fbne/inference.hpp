#pragma once

#include <map>
#include <string>
#include <vector>

#include "fbne/data_table.hpp"
#include "fbne/factor.hpp"
#include "fbne/network.hpp"

namespace fbne {

// Observed states for a subset of a network's variables, keyed by node
// index.
struct Evidence {
  std::map<int, int> assignments;

  static Evidence from_names(
      const BayesianNetwork& net,
      const std::map<std::string, std::string>& named);
};

// Chain-rule product over the CPTs for a complete assignment
// (one state index per node).
double joint_probability(const BayesianNetwork& net,
                         const std::vector<int>& full_assignment);

// Named-state convenience overload.
double joint_probability(const BayesianNetwork& net,
                         const std::map<std::string, std::string>& assignment);

// Exact posterior over `target`'s states given evidence, via variable
// elimination with a min-degree order. Entries sum to 1.
// Throws InvalidQueryError for malformed queries and ZeroEvidenceError
// when the evidence has probability zero.
std::vector<double> posterior(const BayesianNetwork& net, int target,
                              const Evidence& evidence);

// P(evidence) under the network; 1 for empty evidence (up to float
// drift, which stays below 1e-6).
double evidence_probability(const BayesianNetwork& net,
                            const Evidence& evidence);

// Unnormalized joint marginal over `targets` (each entry scaled by
// P(evidence)). Scope is the target set sorted ascending; targets must
// not appear in the evidence.
Factor marginal_factor(const BayesianNetwork& net, const Evidence& evidence,
                       const std::vector<int>& targets);

// Draw n complete records by sampling nodes in topological order.
// Deterministic for a fixed seed. Column order matches the network's
// variable order.
DataTable forward_sample(const BayesianNetwork& net, int n,
                         std::uint64_t seed);

}  // namespace fbne
