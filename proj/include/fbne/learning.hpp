#pragma once

#include <cstdint>
#include <vector>

#include "fbne/data_table.hpp"
#include "fbne/network.hpp"

namespace fbne {

// Parent lists per column of a table; the output of structure learning
// and the input of parameter fitting.
struct Structure {
  std::vector<std::vector<int>> parents;

  static Structure empty(int n_cols) {
    Structure s;
    s.parents.resize(n_cols);
    return s;
  }
};

struct K2Config {
  std::vector<int> ordering;  // permutation of column indices
  int max_parents = 3;
  bool score_cache_enabled = true;
};

struct EmConfig {
  int max_iterations = 100;
  double log_likelihood_tolerance = 1e-4;  // absolute, per iteration
  std::uint64_t seed = 0;
  // Extra runs from random initial parameters; the best final
  // objective wins. 0 keeps only the deterministic available-case
  // start.
  int random_restarts = 0;
};

// Per-iteration EM objective: the observed-data log-likelihood plus
// the log-density of the smoothing prior at the current parameters.
// The smoothed update is the MAP step for that prior, so this sequence
// is non-decreasing; the bare log-likelihood alone can dip by O(1/n)
// around convergence.
struct EmTrace {
  std::vector<double> objectives;
};

// Maximum-likelihood CPTs with Laplace add-one smoothing:
// entry = (N_ijk + 1) / (N_ij + r_i). The table must be fully observed
// and all-categorical. Parent configurations absent from the data get
// uniform rows.
BayesianNetwork fit_parameters_mle(const Structure& structure,
                                   const DataTable& table);

// Expectation-maximization for partially observed tables: expected
// sufficient statistics via exact inference per row, then the smoothed
// MLE update, until the objective gain drops below the tolerance.
BayesianNetwork fit_parameters_em(const Structure& structure,
                                  const DataTable& table,
                                  const EmConfig& cfg,
                                  EmTrace* trace = nullptr);

// Observed-data log-likelihood of a table under a network whose
// variables mirror the table's columns.
double log_likelihood(const BayesianNetwork& net, const DataTable& table);

// Cooper-Herskovits family log-score,
// log prod_j [ (r-1)! / (N_j + r - 1)! * prod_k N_jk! ],
// computed with log-gamma. Rows with a missing cell anywhere in
// {child} u parents are dropped for this family only.
double k2_score(int child, const std::vector<int>& parents,
                const DataTable& table);

// Greedy K2: walks cfg.ordering, repeatedly adding the
// score-maximizing predecessor parent while the score strictly
// improves and max_parents allows. Ties break toward the lowest
// column index.
Structure k2_search(const DataTable& table, const K2Config& cfg);

}  // namespace fbne
