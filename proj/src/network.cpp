#include "fbne/network.hpp"

#include <cmath>
#include <deque>

namespace fbne {

BayesianNetwork::BayesianNetwork(std::vector<Variable> variables,
                                 std::vector<Cpt> cpts)
    : vars_(std::move(variables)), cpts_(std::move(cpts)) {
  validate_and_finalize();
}

int BayesianNetwork::node_index(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int> BayesianNetwork::parent_cards(int i) const {
  std::vector<int> cards;
  cards.reserve(cpts_[i].parents.size());
  for (int p : cpts_[i].parents) cards.push_back(vars_[p].cardinality());
  return cards;
}

double BayesianNetwork::cpt_entry(int i, std::span<const int> full) const {
  const Cpt& c = cpts_[i];
  int row = 0;
  for (int p : c.parents) row = row * vars_[p].cardinality() + full[p];
  return c.rows[row][full[i]];
}

long long BayesianNetwork::joint_state_count(long long cap) const {
  long long total = 1;
  for (const Variable& v : vars_) {
    total *= v.cardinality();
    if (total > cap) return cap + 1;
  }
  return total;
}

void BayesianNetwork::validate_and_finalize() {
  const int n = static_cast<int>(vars_.size());
  if (static_cast<int>(cpts_.size()) != n) {
    throw Error("network needs exactly one CPT per variable");
  }
  for (int i = 0; i < n; ++i) {
    vars_[i].validate();
    const Cpt& c = cpts_[i];
    if (c.child != i) throw Error("CPT child index mismatch at node " +
                                  std::to_string(i));
    long long expected_rows = 1;
    for (int p : c.parents) {
      if (p < 0 || p >= n || p == i) {
        throw Error("invalid parent index for '" + vars_[i].name + "'");
      }
      expected_rows *= vars_[p].cardinality();
    }
    if (static_cast<long long>(c.rows.size()) != expected_rows) {
      throw Error("CPT for '" + vars_[i].name + "' has " +
                  std::to_string(c.rows.size()) + " rows, expected " +
                  std::to_string(expected_rows));
    }
    for (const auto& row : c.rows) {
      if (static_cast<int>(row.size()) != vars_[i].cardinality()) {
        throw Error("CPT row width mismatch for '" + vars_[i].name + "'");
      }
      double sum = 0.0;
      for (double v : row) {
        if (v < 0.0 || !(v <= 1.0)) {
          throw Error("CPT entry out of [0,1] for '" + vars_[i].name + "'");
        }
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-9) {
        throw Error("CPT row for '" + vars_[i].name +
                    "' sums to " + std::to_string(sum));
      }
    }
  }

  // Kahn's algorithm; failure means a cycle.
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<int>> children(n);
  for (int i = 0; i < n; ++i) {
    indegree[i] = static_cast<int>(cpts_[i].parents.size());
    for (int p : cpts_[i].parents) children[p].push_back(i);
  }
  std::deque<int> ready;
  for (int i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  topo_.clear();
  while (!ready.empty()) {
    int v = ready.front();
    ready.pop_front();
    topo_.push_back(v);
    for (int c : children[v]) {
      if (--indegree[c] == 0) ready.push_back(c);
    }
  }
  if (static_cast<int>(topo_.size()) != n) {
    throw Error("network structure contains a cycle");
  }
}

}  // namespace fbne
