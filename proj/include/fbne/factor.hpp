#pragma once

#include <vector>

#include "fbne/network.hpp"

namespace fbne {

// Multidimensional table over a sorted set of variable indices, stored
// row-major with the last variable varying fastest. The workhorse of
// variable elimination and of the EM E-step.
struct Factor {
  std::vector<int> vars;   // ascending node indices
  std::vector<int> cards;  // aligned with vars
  std::vector<double> values;

  bool scalar() const { return vars.empty(); }
  std::size_t size() const { return values.size(); }

  static Factor from_cpt(const BayesianNetwork& net, int node);

  // Drop `var`, keeping only the slice where it equals `state`.
  Factor restricted(int var, int state) const;

  Factor multiplied_by(const Factor& other) const;

  // Sum out `var`.
  Factor summed_out(int var) const;

  double total() const;
};

}  // namespace fbne
