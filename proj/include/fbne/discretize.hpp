#pragma once

#include <map>
#include <string>
#include <vector>

#include "fbne/data_table.hpp"

namespace fbne {

// Cut points for one continuous column. k strictly increasing cuts
// define k+1 half-open intervals (-inf,c0), [c0,c1), ..., [ck-1,+inf).
struct ColumnCuts {
  std::vector<double> cuts;
  bool single_bin_warning = false;  // fewer than 2 distinct values seen

  int bin_count() const { return static_cast<int>(cuts.size()) + 1; }
  int bin_of(double value) const;
  std::vector<std::string> bin_labels() const;
};

// Equal-frequency cuts per continuous column, fitted so that every bin
// holds at least ceil(min_fraction * n_nonmissing) of the fitting rows.
struct DiscretizationSpec {
  std::map<std::string, ColumnCuts> per_column;  // keyed by column name
};

// Fits cuts for every continuous column of `table` (missing cells are
// ignored). min_fraction must lie in (0, 0.5].
DiscretizationSpec fit_discretizer(const DataTable& table,
                                   double min_fraction = 0.10);

// Replaces each continuous column that has cuts in `spec` with a
// categorical column of interval states. Missing cells stay missing.
DataTable apply_discretizer(const DataTable& table,
                            const DiscretizationSpec& spec);

}  // namespace fbne
