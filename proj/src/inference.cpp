#include "fbne/inference.hpp"

#include <algorithm>
#include <set>

#include "fbne/errors.hpp"
#include "fbne/factor.hpp"
#include "fbne/rng.hpp"

namespace fbne {

namespace {

void check_evidence(const BayesianNetwork& net, const Evidence& evidence) {
  for (const auto& [node, state] : evidence.assignments) {
    if (node < 0 || node >= net.node_count()) {
      throw InvalidQueryError("evidence names unknown node " +
                              std::to_string(node));
    }
    if (state < 0 || state >= net.variable(node).cardinality()) {
      throw InvalidQueryError("evidence state out of range for '" +
                              net.variable(node).name + "'");
    }
  }
}

// Restrict all CPT factors to the evidence and eliminate every variable
// not in `keep`, using a min-degree order over the factor graph.
// Returns the product of whatever remains (scope == keep, possibly
// scalar).
Factor eliminate(const BayesianNetwork& net, const Evidence& evidence,
                 const std::set<int>& keep) {
  std::vector<Factor> active;
  active.reserve(net.node_count());
  for (int i = 0; i < net.node_count(); ++i) {
    Factor f = Factor::from_cpt(net, i);
    for (const auto& [node, state] : evidence.assignments) {
      f = f.restricted(node, state);
    }
    active.push_back(std::move(f));
  }

  std::set<int> to_eliminate;
  for (int i = 0; i < net.node_count(); ++i) {
    if (!keep.count(i) && !evidence.assignments.count(i)) {
      to_eliminate.insert(i);
    }
  }

  while (!to_eliminate.empty()) {
    // Min-degree: fewest distinct neighbours among co-occurring
    // variables; ties go to the lowest index.
    int best = -1;
    std::size_t best_degree = SIZE_MAX;
    for (int v : to_eliminate) {
      std::set<int> neighbours;
      for (const Factor& f : active) {
        if (std::find(f.vars.begin(), f.vars.end(), v) == f.vars.end()) {
          continue;
        }
        neighbours.insert(f.vars.begin(), f.vars.end());
      }
      neighbours.erase(v);
      if (neighbours.size() < best_degree) {
        best_degree = neighbours.size();
        best = v;
      }
    }

    Factor product;
    product.values = {1.0};
    std::vector<Factor> next;
    for (Factor& f : active) {
      if (std::find(f.vars.begin(), f.vars.end(), best) != f.vars.end()) {
        product = product.multiplied_by(f);
      } else {
        next.push_back(std::move(f));
      }
    }
    next.push_back(product.summed_out(best));
    active = std::move(next);
    to_eliminate.erase(best);
  }

  Factor result;
  result.values = {1.0};
  for (const Factor& f : active) result = result.multiplied_by(f);
  return result;
}

}  // namespace

Evidence Evidence::from_names(const BayesianNetwork& net,
                              const std::map<std::string, std::string>& named) {
  Evidence e;
  for (const auto& [name, label] : named) {
    const int node = net.node_index(name);
    if (node < 0) throw InvalidQueryError("unknown variable '" + name + "'");
    const int state = net.variable(node).state_index(label);
    if (state < 0) {
      throw InvalidQueryError("unknown state '" + label + "' for '" + name +
                              "'");
    }
    e.assignments[node] = state;
  }
  return e;
}

double joint_probability(const BayesianNetwork& net,
                         const std::vector<int>& full_assignment) {
  if (static_cast<int>(full_assignment.size()) != net.node_count()) {
    throw InvalidQueryError("assignment must cover every variable");
  }
  for (int i = 0; i < net.node_count(); ++i) {
    if (full_assignment[i] < 0 ||
        full_assignment[i] >= net.variable(i).cardinality()) {
      throw InvalidQueryError("state out of range for '" +
                              net.variable(i).name + "'");
    }
  }
  double p = 1.0;
  for (int i = 0; i < net.node_count(); ++i) {
    p *= net.cpt_entry(i, full_assignment);
  }
  return p;
}

double joint_probability(const BayesianNetwork& net,
                         const std::map<std::string, std::string>& assignment) {
  std::vector<int> full(net.node_count(), -1);
  for (const auto& [name, label] : assignment) {
    const int node = net.node_index(name);
    if (node < 0) throw InvalidQueryError("unknown variable '" + name + "'");
    const int state = net.variable(node).state_index(label);
    if (state < 0) {
      throw InvalidQueryError("unknown state '" + label + "' for '" + name +
                              "'");
    }
    full[node] = state;
  }
  for (int i = 0; i < net.node_count(); ++i) {
    if (full[i] < 0) {
      throw InvalidQueryError("assignment misses variable '" +
                              net.variable(i).name + "'");
    }
  }
  return joint_probability(net, full);
}

std::vector<double> posterior(const BayesianNetwork& net, int target,
                              const Evidence& evidence) {
  if (target < 0 || target >= net.node_count()) {
    throw InvalidQueryError("unknown target node " + std::to_string(target));
  }
  check_evidence(net, evidence);
  if (evidence.assignments.count(target)) {
    throw InvalidQueryError("target '" + net.variable(target).name +
                            "' is already assigned in the evidence");
  }

  Factor result = eliminate(net, evidence, {target});
  // The eliminated product has scope {target}: the unnormalized
  // posterior scaled by P(evidence).
  std::vector<double> probs(net.variable(target).cardinality(), 0.0);
  if (result.scalar()) {
    throw Error("elimination lost the target scope");
  }
  for (int s = 0; s < net.variable(target).cardinality(); ++s) {
    probs[s] = result.values[s];
  }
  double mass = 0.0;
  for (double p : probs) mass += p;
  if (mass <= 0.0) {
    throw ZeroEvidenceError("evidence has probability zero");
  }
  for (double& p : probs) p /= mass;
  return probs;
}

double evidence_probability(const BayesianNetwork& net,
                            const Evidence& evidence) {
  check_evidence(net, evidence);
  Factor result = eliminate(net, evidence, {});
  return result.values.empty() ? 0.0 : result.values[0];
}

Factor marginal_factor(const BayesianNetwork& net, const Evidence& evidence,
                       const std::vector<int>& targets) {
  check_evidence(net, evidence);
  std::set<int> keep;
  for (int t : targets) {
    if (t < 0 || t >= net.node_count()) {
      throw InvalidQueryError("unknown target node " + std::to_string(t));
    }
    if (evidence.assignments.count(t)) {
      throw InvalidQueryError("target '" + net.variable(t).name +
                              "' is already assigned in the evidence");
    }
    keep.insert(t);
  }
  return eliminate(net, evidence, keep);
}

DataTable forward_sample(const BayesianNetwork& net, int n,
                         std::uint64_t seed) {
  if (n < 0) throw Error("sample count must be non-negative");
  Rng rng(seed);
  std::vector<std::vector<int>> codes(net.node_count());
  for (auto& c : codes) c.reserve(n);

  std::vector<int> record(net.node_count(), 0);
  for (int i = 0; i < n; ++i) {
    for (int node : net.topological_order()) {
      const Cpt& cpt = net.cpt(node);
      int row = 0;
      for (int p : cpt.parents) {
        row = row * net.variable(p).cardinality() + record[p];
      }
      const std::vector<double>& dist = cpt.rows[row];
      const double u = rng.next_double();
      double acc = 0.0;
      int state = static_cast<int>(dist.size()) - 1;
      for (std::size_t s = 0; s < dist.size(); ++s) {
        acc += dist[s];
        if (u < acc) {
          state = static_cast<int>(s);
          break;
        }
      }
      record[node] = state;
    }
    for (int c = 0; c < net.node_count(); ++c) codes[c].push_back(record[c]);
  }

  DataTable table;
  for (int c = 0; c < net.node_count(); ++c) {
    table.add_categorical_column(net.variable(c), std::move(codes[c]));
  }
  return table;
}

}  // namespace fbne
