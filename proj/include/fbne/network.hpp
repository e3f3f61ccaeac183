#pragma once

#include <span>
#include <string>
#include <vector>

#include "fbne/variable.hpp"

namespace fbne {

// Conditional probability table for one node. Rows are indexed by the
// parent state combination (parents in declared order, last parent
// varying fastest); each row is a distribution over the child's states.
struct Cpt {
  int child = -1;
  std::vector<int> parents;
  std::vector<std::vector<double>> rows;

  // Row index for a full assignment of the parents, given their
  // cardinalities in `parent_cards`.
  static int row_index(std::span<const int> parent_states,
                       std::span<const int> parent_cards) {
    int idx = 0;
    for (std::size_t i = 0; i < parent_states.size(); ++i) {
      idx = idx * parent_cards[i] + parent_states[i];
    }
    return idx;
  }
};

// Discrete Bayesian network: variables, a parent list per variable and
// one Cpt per variable. Immutable once validated; inference from many
// threads is safe.
class BayesianNetwork {
 public:
  BayesianNetwork() = default;
  BayesianNetwork(std::vector<Variable> variables, std::vector<Cpt> cpts);

  int node_count() const { return static_cast<int>(vars_.size()); }
  const Variable& variable(int i) const { return vars_[i]; }
  const std::vector<Variable>& variables() const { return vars_; }
  const Cpt& cpt(int i) const { return cpts_[i]; }
  const std::vector<int>& parents(int i) const { return cpts_[i].parents; }

  // Index of the named variable, or -1.
  int node_index(const std::string& name) const;

  // Node indices in an order where parents precede children.
  const std::vector<int>& topological_order() const { return topo_; }

  // Parent cardinalities of node i, in declared parent order.
  std::vector<int> parent_cards(int i) const;

  // P(node i = state | parents at the states given by `full`), where
  // `full` assigns a state index to every node.
  double cpt_entry(int i, std::span<const int> full) const;

  // Product of the per-node cardinalities, saturating at `cap`.
  long long joint_state_count(long long cap) const;

 private:
  void validate_and_finalize();

  std::vector<Variable> vars_;
  std::vector<Cpt> cpts_;
  std::vector<int> topo_;
};

}  // namespace fbne
