#pragma once

#include <iosfwd>
#include <string>

#include "fbne/network.hpp"

namespace fbne {

// Reads a discrete network from the BIF subset grammar: a `network`
// block, `variable` blocks with `type discrete`, and `probability`
// blocks whose rows are either `table p1, ..., pk;` or
// `(state, ...) p1, ..., pk;`. Throws FormatError with a line number on
// grammar violations; CPT rows must sum to 1 within 1e-6.
BayesianNetwork load_bif(const std::string& path);
BayesianNetwork parse_bif(std::istream& in, const std::string& source_name);

std::string write_bif(const BayesianNetwork& net);
void write_bif_file(const BayesianNetwork& net, const std::string& path);

// The 8-node Lauritzen-Spiegelhalter chest-clinic network, compiled in.
// Matches fixtures/asia.bif entry for entry.
BayesianNetwork builtin_asia();

}  // namespace fbne
