#pragma once

#include <cstdint>

#include "fbne/data_table.hpp"

namespace fbne {

// Returns a copy of `table` where every cell outside the class column
// is independently replaced by the missing marker with probability
// `level`. The class column is exempt: evaluation always needs true
// labels. Deterministic per seed.
DataTable inject_missing(const DataTable& table, double level,
                         std::uint64_t seed, int class_column);

}  // namespace fbne
