#pragma once

#include <string>
#include <vector>

#include "fbne/errors.hpp"

namespace fbne {

// A discrete variable: a name plus an ordered list of state labels.
struct Variable {
  std::string name;
  std::vector<std::string> states;

  int cardinality() const { return static_cast<int>(states.size()); }

  // Index of `label` among the states, or -1 if unknown.
  int state_index(const std::string& label) const {
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i] == label) return static_cast<int>(i);
    }
    return -1;
  }

  void validate() const {
    if (states.size() < 2) {
      throw Error("variable '" + name + "' needs at least 2 states");
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
      for (std::size_t j = i + 1; j < states.size(); ++j) {
        if (states[i] == states[j]) {
          throw Error("variable '" + name + "' has duplicate state '" +
                      states[i] + "'");
        }
      }
    }
  }
};

}  // namespace fbne
