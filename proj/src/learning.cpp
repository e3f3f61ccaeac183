#include "fbne/learning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "fbne/errors.hpp"
#include "fbne/factor.hpp"
#include "fbne/inference.hpp"
#include "fbne/rng.hpp"

namespace fbne {

namespace {

// Above this joint-state count the E-step switches from a single joint
// table to per-family variable elimination.
constexpr long long kJointLimit = 1 << 18;

void require_categorical(const DataTable& table) {
  for (int c = 0; c < table.n_cols(); ++c) {
    if (table.column(c).continuous) {
      throw Error("column '" + table.column(c).name() +
                  "' is continuous; discretize first");
    }
  }
}

std::vector<Variable> table_variables(const DataTable& table) {
  std::vector<Variable> vars;
  vars.reserve(table.n_cols());
  for (int c = 0; c < table.n_cols(); ++c) vars.push_back(table.column(c).var);
  return vars;
}

long long config_count(const DataTable& table,
                       const std::vector<int>& parents) {
  long long n = 1;
  for (int p : parents) {
    n *= table.column(p).var.cardinality();
    if (n > (1LL << 26)) {
      throw Error("parent configuration space too large");
    }
  }
  return n;
}

// Smoothed M-step / MLE update from (possibly fractional) counts.
std::vector<std::vector<double>> smoothed_rows(
    const std::vector<std::vector<double>>& counts, int child_card) {
  std::vector<std::vector<double>> rows(counts.size());
  for (std::size_t j = 0; j < counts.size(); ++j) {
    double total = 0.0;
    for (double v : counts[j]) total += v;
    rows[j].resize(child_card);
    for (int k = 0; k < child_card; ++k) {
      rows[j][k] = (counts[j][k] + 1.0) / (total + child_card);
    }
  }
  return rows;
}

// Per-family observed counts using only rows where the whole family is
// observed (pairwise deletion).
std::vector<std::vector<double>> available_case_counts(
    const DataTable& table, int child, const std::vector<int>& parents) {
  const int child_card = table.column(child).var.cardinality();
  const long long n_configs = config_count(table, parents);
  std::vector<std::vector<double>> counts(
      n_configs, std::vector<double>(child_card, 0.0));
  for (int r = 0; r < table.n_rows(); ++r) {
    const int k = table.code(r, child);
    if (k == kMissing) continue;
    long long j = 0;
    bool ok = true;
    for (int p : parents) {
      const int s = table.code(r, p);
      if (s == kMissing) {
        ok = false;
        break;
      }
      j = j * table.column(p).var.cardinality() + s;
    }
    if (ok) counts[j][k] += 1.0;
  }
  return counts;
}

BayesianNetwork network_from_counts(
    const Structure& structure, const DataTable& table,
    const std::vector<std::vector<std::vector<double>>>& counts) {
  std::vector<Cpt> cpts(table.n_cols());
  for (int c = 0; c < table.n_cols(); ++c) {
    cpts[c].child = c;
    cpts[c].parents = structure.parents[c];
    cpts[c].rows =
        smoothed_rows(counts[c], table.column(c).var.cardinality());
  }
  return BayesianNetwork(table_variables(table), std::move(cpts));
}

// Key identifying which cells of a row are observed and with which
// states; rows sharing a key share their E-step result.
struct RowSignature {
  std::vector<int> codes;  // kMissing where unobserved
  bool operator<(const RowSignature& o) const { return codes < o.codes; }
};

struct ExpectedCounts {
  std::vector<std::vector<std::vector<double>>> family;  // [node][cfg][state]
  double log_likelihood = 0.0;
};

std::vector<std::vector<std::vector<double>>> zero_counts(
    const Structure& structure, const DataTable& table) {
  std::vector<std::vector<std::vector<double>>> counts(table.n_cols());
  for (int c = 0; c < table.n_cols(); ++c) {
    counts[c].assign(config_count(table, structure.parents[c]),
                     std::vector<double>(table.column(c).var.cardinality(),
                                         0.0));
  }
  return counts;
}

// E-step over one signature via a full joint walk: enumerate the
// assignments consistent with the observed cells, accumulate family
// counts weighted by the normalized joint mass.
void accumulate_joint_walk(const BayesianNetwork& net,
                           const Structure& structure,
                           const RowSignature& sig, double multiplicity,
                           ExpectedCounts* out) {
  const int n = net.node_count();
  std::vector<int> hidden;
  std::vector<int> assign(n);
  for (int i = 0; i < n; ++i) {
    if (sig.codes[i] == kMissing) {
      hidden.push_back(i);
      assign[i] = 0;
    } else {
      assign[i] = sig.codes[i];
    }
  }

  // First pass: total mass of the consistent slice.
  double mass = 0.0;
  const auto walk = [&](auto&& visit) {
    while (true) {
      visit();
      int d = static_cast<int>(hidden.size()) - 1;
      for (; d >= 0; --d) {
        const int v = hidden[d];
        if (++assign[v] < net.variable(v).cardinality()) break;
        assign[v] = 0;
      }
      if (d < 0) break;
    }
  };
  walk([&] { mass += joint_probability(net, assign); });
  if (mass <= 0.0) {
    throw ZeroEvidenceError("row has probability zero under current model");
  }
  out->log_likelihood += multiplicity * std::log(mass);

  for (int v : hidden) assign[v] = 0;
  walk([&] {
    const double w = multiplicity * (joint_probability(net, assign) / mass);
    if (w == 0.0) return;
    for (int c = 0; c < n; ++c) {
      long long j = 0;
      for (int p : structure.parents[c]) {
        j = j * net.variable(p).cardinality() + assign[p];
      }
      out->family[c][j][assign[c]] += w;
    }
  });
}

// E-step over one signature via variable elimination, for networks too
// large to enumerate: one elimination for the evidence mass, one per
// family with hidden members.
void accumulate_by_elimination(const BayesianNetwork& net,
                               const Structure& structure,
                               const RowSignature& sig, double multiplicity,
                               ExpectedCounts* out) {
  Evidence evidence;
  for (int i = 0; i < net.node_count(); ++i) {
    if (sig.codes[i] != kMissing) evidence.assignments[i] = sig.codes[i];
  }
  const double mass = evidence_probability(net, evidence);
  if (mass <= 0.0) {
    throw ZeroEvidenceError("row has probability zero under current model");
  }
  out->log_likelihood += multiplicity * std::log(mass);

  for (int c = 0; c < net.node_count(); ++c) {
    std::vector<int> family = structure.parents[c];
    family.push_back(c);
    std::vector<int> hidden;
    for (int v : family) {
      if (sig.codes[v] == kMissing) hidden.push_back(v);
    }
    std::sort(hidden.begin(), hidden.end());
    hidden.erase(std::unique(hidden.begin(), hidden.end()), hidden.end());

    const auto config_of = [&](const std::vector<int>& full) {
      long long j = 0;
      for (int p : structure.parents[c]) {
        j = j * net.variable(p).cardinality() + full[p];
      }
      return j;
    };

    std::vector<int> full(sig.codes);
    if (hidden.empty()) {
      out->family[c][config_of(full)][full[c]] += multiplicity;
      continue;
    }

    Factor marginal = marginal_factor(net, evidence, hidden);
    const double total = marginal.total();
    // total == mass up to float error; normalize against itself so the
    // weights sum to exactly the row multiplicity.
    std::vector<int> hidden_state(hidden.size(), 0);
    for (std::size_t idx = 0; idx < marginal.values.size(); ++idx) {
      // marginal.vars is sorted ascending and equals `hidden` sorted.
      std::size_t rem = idx;
      for (int d = static_cast<int>(marginal.vars.size()) - 1; d >= 0; --d) {
        hidden_state[d] = static_cast<int>(rem % marginal.cards[d]);
        rem /= marginal.cards[d];
      }
      for (std::size_t d = 0; d < marginal.vars.size(); ++d) {
        full[marginal.vars[d]] = hidden_state[d];
      }
      const double w = multiplicity * (marginal.values[idx] / total);
      if (w != 0.0) out->family[c][config_of(full)][full[c]] += w;
    }
  }
}

}  // namespace

BayesianNetwork fit_parameters_mle(const Structure& structure,
                                   const DataTable& table) {
  require_categorical(table);
  if (static_cast<int>(structure.parents.size()) != table.n_cols()) {
    throw Error("structure does not match the table's columns");
  }
  if (table.has_missing()) {
    throw Error("table has missing cells; use fit_parameters_em");
  }
  std::vector<std::vector<std::vector<double>>> counts(table.n_cols());
  for (int c = 0; c < table.n_cols(); ++c) {
    counts[c] = available_case_counts(table, c, structure.parents[c]);
  }
  return network_from_counts(structure, table, counts);
}

double log_likelihood(const BayesianNetwork& net, const DataTable& table) {
  require_categorical(table);
  double ll = 0.0;
  std::map<RowSignature, int> groups;
  for (int r = 0; r < table.n_rows(); ++r) {
    RowSignature sig;
    sig.codes.resize(table.n_cols());
    for (int c = 0; c < table.n_cols(); ++c) sig.codes[c] = table.code(r, c);
    ++groups[sig];
  }
  const bool small = net.joint_state_count(kJointLimit) <= kJointLimit;
  for (const auto& [sig, mult] : groups) {
    double mass;
    bool complete = true;
    for (int v : sig.codes) complete = complete && v != kMissing;
    if (complete) {
      mass = joint_probability(net, sig.codes);
    } else if (small) {
      // Sum the joint over the consistent slice.
      std::vector<int> hidden, assign(sig.codes);
      for (int i = 0; i < net.node_count(); ++i) {
        if (sig.codes[i] == kMissing) {
          hidden.push_back(i);
          assign[i] = 0;
        }
      }
      mass = 0.0;
      while (true) {
        mass += joint_probability(net, assign);
        int d = static_cast<int>(hidden.size()) - 1;
        for (; d >= 0; --d) {
          if (++assign[hidden[d]] < net.variable(hidden[d]).cardinality())
            break;
          assign[hidden[d]] = 0;
        }
        if (d < 0) break;
      }
    } else {
      Evidence e;
      for (int i = 0; i < net.node_count(); ++i) {
        if (sig.codes[i] != kMissing) e.assignments[i] = sig.codes[i];
      }
      mass = evidence_probability(net, e);
    }
    if (mass <= 0.0) {
      throw ZeroEvidenceError("table row has probability zero");
    }
    ll += mult * std::log(mass);
  }
  return ll;
}

BayesianNetwork fit_parameters_em(const Structure& structure,
                                  const DataTable& table, const EmConfig& cfg,
                                  EmTrace* trace) {
  require_categorical(table);
  if (static_cast<int>(structure.parents.size()) != table.n_cols()) {
    throw Error("structure does not match the table's columns");
  }
  if (cfg.max_iterations < 1) throw Error("max_iterations must be >= 1");
  if (!(cfg.log_likelihood_tolerance > 0.0)) {
    throw Error("log_likelihood_tolerance must be positive");
  }
  for (int c = 0; c < table.n_cols(); ++c) {
    bool any = false;
    for (int r = 0; r < table.n_rows() && !any; ++r) {
      any = table.code(r, c) != kMissing;
    }
    if (!any) {
      throw Error("column '" + table.column(c).name() +
                  "' has no observed cells");
    }
  }

  // Group identical observation patterns; the E-step cost is per
  // distinct pattern, not per row.
  std::map<RowSignature, int> groups;
  for (int r = 0; r < table.n_rows(); ++r) {
    RowSignature sig;
    sig.codes.resize(table.n_cols());
    for (int c = 0; c < table.n_cols(); ++c) sig.codes[c] = table.code(r, c);
    ++groups[sig];
  }

  // Log-density of the implicit Dirichlet(2,...,2) smoothing prior at
  // the current tables. The smoothed update maximizes expected
  // log-likelihood plus this term, so likelihood + prior is the
  // quantity EM provably never decreases.
  const auto log_prior = [](const BayesianNetwork& net) {
    double lp = 0.0;
    for (int i = 0; i < net.node_count(); ++i) {
      for (const auto& row : net.cpt(i).rows) {
        for (double v : row) lp += std::log(v);
      }
    }
    return lp;
  };

  const auto run = [&](BayesianNetwork net, EmTrace* tr) {
    const bool small = net.joint_state_count(kJointLimit) <= kJointLimit;
    double prev = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
      ExpectedCounts expected;
      expected.family = zero_counts(structure, table);
      for (const auto& [sig, mult] : groups) {
        if (small) {
          accumulate_joint_walk(net, structure, sig, mult, &expected);
        } else {
          accumulate_by_elimination(net, structure, sig, mult, &expected);
        }
      }
      const double objective = expected.log_likelihood + log_prior(net);
      if (tr) tr->objectives.push_back(objective);

      BayesianNetwork updated =
          network_from_counts(structure, table, expected.family);
      const bool converged =
          iter > 0 && objective - prev < cfg.log_likelihood_tolerance;
      prev = objective;
      net = std::move(updated);
      if (converged) break;
    }
    return std::make_pair(std::move(net), prev);
  };

  // Deterministic start: smoothed MLE on available cases per family.
  std::vector<std::vector<std::vector<double>>> counts(table.n_cols());
  for (int c = 0; c < table.n_cols(); ++c) {
    counts[c] = available_case_counts(table, c, structure.parents[c]);
  }
  EmTrace base_trace;
  auto [best_net, best_ll] =
      run(network_from_counts(structure, table, counts), &base_trace);

  Rng rng(cfg.seed);
  for (int restart = 0; restart < cfg.random_restarts; ++restart) {
    std::vector<Cpt> cpts(table.n_cols());
    for (int c = 0; c < table.n_cols(); ++c) {
      cpts[c].child = c;
      cpts[c].parents = structure.parents[c];
      const long long n_cfg = config_count(table, structure.parents[c]);
      const int card = table.column(c).var.cardinality();
      cpts[c].rows.assign(n_cfg, std::vector<double>(card, 0.0));
      for (auto& row : cpts[c].rows) {
        double sum = 0.0;
        for (double& v : row) {
          v = 0.1 + rng.next_double();
          sum += v;
        }
        for (double& v : row) v /= sum;
      }
    }
    auto [net, ll] =
        run(BayesianNetwork(table_variables(table), std::move(cpts)), nullptr);
    if (ll > best_ll) {
      best_ll = ll;
      best_net = std::move(net);
      base_trace.objectives.clear();  // trace follows the winner only
    }
  }
  if (trace && !base_trace.objectives.empty()) {
    *trace = std::move(base_trace);
  } else if (trace) {
    // A restart won; continue from its fixed point so the trace matches
    // the returned parameters.
    EmTrace t;
    auto [net, ll] = run(best_net, &t);
    best_net = std::move(net);
    *trace = std::move(t);
  }
  return best_net;
}

double k2_score(int child, const std::vector<int>& parents,
                const DataTable& table) {
  require_categorical(table);
  const int r = table.column(child).var.cardinality();
  const long long n_configs = config_count(table, parents);

  // Dense counting for small configuration spaces, hashed otherwise.
  std::unordered_map<long long, std::vector<int>> sparse;
  std::vector<std::vector<int>> dense;
  const bool use_dense = n_configs <= (1 << 16);
  if (use_dense) dense.assign(n_configs, {});

  for (int row = 0; row < table.n_rows(); ++row) {
    const int k = table.code(row, child);
    if (k == kMissing) continue;
    long long j = 0;
    bool ok = true;
    for (int p : parents) {
      const int s = table.code(row, p);
      if (s == kMissing) {
        ok = false;
        break;
      }
      j = j * table.column(p).var.cardinality() + s;
    }
    if (!ok) continue;
    auto& counts = use_dense ? dense[j] : sparse[j];
    if (counts.empty()) counts.assign(r, 0);
    ++counts[k];
  }

  const auto family_term = [r](const std::vector<int>& counts) {
    int nj = 0;
    double term = 0.0;
    for (int c : counts) {
      nj += c;
      term += std::lgamma(static_cast<double>(c) + 1.0);  // log c!
    }
    term += std::lgamma(static_cast<double>(r));           // log (r-1)!
    term -= std::lgamma(static_cast<double>(nj + r));      // log (Nj+r-1)!
    return term;
  };

  double score = 0.0;
  if (use_dense) {
    for (const auto& counts : dense) {
      if (!counts.empty()) score += family_term(counts);
    }
  } else {
    for (const auto& [j, counts] : sparse) score += family_term(counts);
  }
  return score;
}

Structure k2_search(const DataTable& table, const K2Config& cfg) {
  require_categorical(table);
  const int n = table.n_cols();
  if (static_cast<int>(cfg.ordering.size()) != n) {
    throw Error("K2 ordering must be a permutation of all columns");
  }
  std::vector<bool> seen(n, false);
  for (int v : cfg.ordering) {
    if (v < 0 || v >= n || seen[v]) {
      throw Error("K2 ordering must be a permutation of all columns");
    }
    seen[v] = true;
  }
  if (cfg.max_parents < 0) throw Error("max_parents must be >= 0");

  std::map<std::pair<int, std::vector<int>>, double> cache;
  const auto score = [&](int child, std::vector<int> parents) {
    std::sort(parents.begin(), parents.end());
    if (!cfg.score_cache_enabled) return k2_score(child, parents, table);
    const auto key = std::make_pair(child, parents);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double s = k2_score(child, parents, table);
    cache.emplace(key, s);
    return s;
  };

  Structure structure = Structure::empty(n);
  for (std::size_t pos = 0; pos < cfg.ordering.size(); ++pos) {
    const int child = cfg.ordering[pos];
    std::vector<int>& parents = structure.parents[child];
    double current = score(child, parents);
    while (static_cast<int>(parents.size()) < cfg.max_parents) {
      int best_candidate = -1;
      double best_score = current;
      for (std::size_t prev = 0; prev < pos; ++prev) {
        const int candidate = cfg.ordering[prev];
        if (std::find(parents.begin(), parents.end(), candidate) !=
            parents.end()) {
          continue;
        }
        std::vector<int> trial = parents;
        trial.push_back(candidate);
        const double s = score(child, trial);
        if (s > best_score ||
            (s == best_score && best_candidate >= 0 &&
             candidate < best_candidate)) {
          best_score = s;
          best_candidate = candidate;
        }
      }
      if (best_candidate < 0) break;
      parents.push_back(best_candidate);
      current = best_score;
    }
    std::sort(parents.begin(), parents.end());
  }
  return structure;
}

}  // namespace fbne
