#include "fbne/missing.hpp"

#include <limits>

#include "fbne/errors.hpp"
#include "fbne/rng.hpp"

namespace fbne {

DataTable inject_missing(const DataTable& table, double level,
                         std::uint64_t seed, int class_column) {
  if (!(level >= 0.0 && level < 1.0)) {
    throw Error("missing level must lie in [0,1)");
  }
  if (class_column < 0 || class_column >= table.n_cols()) {
    throw Error("class column out of range");
  }
  if (level == 0.0) return table;

  Rng rng(seed);
  DataTable out;
  for (int c = 0; c < table.n_cols(); ++c) {
    const Column& col = table.column(c);
    if (col.continuous) {
      std::vector<double> values = col.reals;
      if (c != class_column) {
        for (double& v : values) {
          if (rng.next_double() < level) {
            v = std::numeric_limits<double>::quiet_NaN();
          }
        }
      }
      out.add_continuous_column(col.var.name, std::move(values));
    } else {
      std::vector<int> codes = col.codes;
      if (c != class_column) {
        for (int& v : codes) {
          if (rng.next_double() < level) v = kMissing;
        }
      }
      out.add_categorical_column(col.var, std::move(codes));
    }
  }
  return out;
}

}  // namespace fbne
