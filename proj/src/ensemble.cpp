#include "fbne/ensemble.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>

#include "fbne/errors.hpp"
#include "fbne/inference.hpp"
#include "fbne/rng.hpp"

namespace fbne {

namespace {

void check_trainable_class(const DataTable& slice, int class_col,
                           int party_id) {
  if (slice.column(class_col).continuous) {
    throw Error("class column must be categorical");
  }
  std::set<int> seen;
  for (int r = 0; r < slice.n_rows(); ++r) {
    const int code = slice.code(r, class_col);
    if (code != kMissing) seen.insert(code);
  }
  if (seen.size() < 2) {
    throw DegeneratePartyError(
        "party " + std::to_string(party_id) + " observes " +
        std::to_string(seen.size()) +
        " class state(s); at least 2 are needed to train");
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

}  // namespace

TrainedMember train_member(const DataTable& table,
                           const std::vector<int>& columns_class_last,
                           const std::vector<int>& rows, int party_id,
                           const LearningConfig& cfg) {
  if (columns_class_last.size() < 2) {
    throw Error("a model needs the class column plus at least one attribute");
  }
  DataTable slice = table.select(rows, columns_class_last);
  const int class_col = slice.n_cols() - 1;
  check_trainable_class(slice, class_col, party_id);

  TrainedMember member;
  member.party_id = party_id;
  member.source_cols = columns_class_last;
  member.class_node = class_col;
  member.disc = fit_discretizer(slice, cfg.min_bin_fraction);
  DataTable coded = apply_discretizer(slice, member.disc);

  K2Config k2;
  k2.max_parents = cfg.max_parents;
  k2.ordering.resize(coded.n_cols());
  std::iota(k2.ordering.begin(), k2.ordering.end(), 0);
  auto mark = std::chrono::steady_clock::now();
  const Structure structure = k2_search(coded, k2);
  member.structure_seconds = seconds_since(mark);

  mark = std::chrono::steady_clock::now();
  member.net = coded.has_missing()
                   ? fit_parameters_em(structure, coded, cfg.em)
                   : fit_parameters_mle(structure, coded);
  member.parameter_seconds = seconds_since(mark);
  return member;
}

EnsembleModel train_fbne(const DataTable& table,
                         const std::vector<PartyView>& parties,
                         const LearningConfig& cfg) {
  if (parties.empty()) throw Error("no parties to train");
  EnsembleModel ensemble;
  ensemble.hard_voting = cfg.hard_voting;
  const int class_column = parties.front().class_column;
  ensemble.class_variable = table.column(class_column).var.name;
  ensemble.class_states = table.column(class_column).var.states;
  for (const PartyView& party : parties) {
    if (party.class_column != class_column) {
      throw Error("parties disagree on the class column");
    }
    ensemble.members.push_back(train_member(
        table, party.local_columns, party.train_rows, party.party_id, cfg));
  }
  return ensemble;
}

std::vector<double> member_posterior(const TrainedMember& member,
                                     const DataTable& table, int row) {
  Evidence evidence;
  for (int node = 0; node < member.net.node_count(); ++node) {
    if (node == member.class_node) continue;
    const int col = member.source_cols[node];
    const Column& column = table.column(col);
    int state = -1;
    if (column.continuous) {
      const double v = table.real(row, col);
      if (std::isnan(v)) continue;
      const auto it = member.disc.per_column.find(column.var.name);
      if (it == member.disc.per_column.end()) continue;
      state = it->second.bin_of(v);
    } else {
      const int code = table.code(row, col);
      if (code == kMissing) continue;
      // Map through the label so a differently coded table still works;
      // unknown labels become non-evidence.
      state = member.net.variable(node).state_index(column.var.states[code]);
    }
    if (state < 0 || state >= member.net.variable(node).cardinality()) continue;
    evidence.assignments[node] = state;
  }
  try {
    return posterior(member.net, member.class_node, evidence);
  } catch (const ZeroEvidenceError&) {
    return posterior(member.net, member.class_node, Evidence{});
  }
}

std::vector<double> predict(const EnsembleModel& ensemble,
                            const DataTable& table, int row,
                            std::uint64_t mask_seed) {
  if (ensemble.members.empty()) throw Error("empty ensemble");
  std::vector<std::vector<double>> vectors;
  std::vector<double> weights;
  for (const TrainedMember& member : ensemble.members) {
    std::vector<double> p = member_posterior(member, table, row);
    if (ensemble.hard_voting) {
      const auto best = std::max_element(p.begin(), p.end());
      std::vector<double> vote(p.size(), 0.0);
      vote[best - p.begin()] = 1.0;
      p = std::move(vote);
    }
    vectors.push_back(std::move(p));
    weights.push_back(member.weight);
  }

  SecureSumSession session(static_cast<int>(vectors.size()), mask_seed);
  std::vector<double> result = secure_weighted_sum(session, vectors, weights);
  double mass = 0.0;
  for (double v : result) mass += v;
  if (mass <= 0.0) throw Error("aggregated prediction has no mass");
  for (double& v : result) v /= mass;
  return result;
}

int classify(const EnsembleModel& ensemble, const DataTable& table, int row,
             std::uint64_t mask_seed) {
  const std::vector<double> p = predict(ensemble, table, row, mask_seed);
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

BaselineSuite train_baselines(const DataTable& table,
                              const std::vector<PartyView>& parties,
                              const LearningConfig& cfg) {
  if (parties.empty()) throw Error("no parties to train");
  BaselineSuite suite;
  for (const PartyView& party : parties) {
    suite.local_models.push_back(train_member(
        table, party.local_columns, party.train_rows, party.party_id, cfg));
  }

  const int class_column = parties.front().class_column;
  std::vector<int> cols;
  for (int c = 0; c < table.n_cols(); ++c) {
    if (c != class_column) cols.push_back(c);
  }
  cols.push_back(class_column);
  // Pooled data = union of what the parties hold.
  std::set<int> pooled;
  for (const PartyView& party : parties) {
    pooled.insert(party.train_rows.begin(), party.train_rows.end());
  }
  const std::vector<int> rows(pooled.begin(), pooled.end());
  suite.central_model = train_member(table, cols, rows, -1, cfg);

  bool any_missing = false;
  for (int r : rows) {
    for (int c : cols) {
      if (table.is_missing(r, c)) {
        any_missing = true;
        break;
      }
    }
    if (any_missing) break;
  }
  suite.vertibayes_equivalent = suite.central_model;
  if (any_missing) {
    const auto mark = std::chrono::steady_clock::now();
    suite.vertibayes_equivalent.net =
        synthetic_bootstrap(suite.central_model.net,
                            static_cast<int>(rows.size()),
                            Rng(cfg.seed).derive(71).seed());
    suite.vertibayes_equivalent.parameter_seconds += seconds_since(mark);
  }
  return suite;
}

BayesianNetwork synthetic_bootstrap(const BayesianNetwork& net, int n,
                                    std::uint64_t seed) {
  const DataTable synthetic = forward_sample(net, n, seed);
  Structure structure = Structure::empty(net.node_count());
  for (int i = 0; i < net.node_count(); ++i) {
    structure.parents[i] = net.parents(i);
  }
  return fit_parameters_mle(structure, synthetic);
}

}  // namespace fbne
