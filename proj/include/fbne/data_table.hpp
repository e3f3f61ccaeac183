#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "fbne/variable.hpp"

namespace fbne {

// Missing marker for discrete cells. Kept outside the state range so it
// can never be learned as a category.
inline constexpr int kMissing = -1;

// One column of a DataTable. Either categorical (cells are state
// indices into `var.states`, kMissing for absent values) or continuous
// (cells are raw doubles, NaN for absent values). Continuous columns
// become categorical once a DiscretizationSpec is applied.
struct Column {
  Variable var;
  bool continuous = false;
  std::vector<int> codes;     // categorical cells
  std::vector<double> reals;  // continuous cells

  const std::string& name() const { return var.name; }
};

// Rectangular table of discrete (or not-yet-discretized) values with an
// explicit missing marker. Column-major storage.
class DataTable {
 public:
  int n_rows() const { return n_rows_; }
  int n_cols() const { return static_cast<int>(cols_.size()); }
  const Column& column(int c) const { return cols_[c]; }
  const std::vector<Column>& columns() const { return cols_; }

  int column_index(const std::string& name) const {
    for (std::size_t i = 0; i < cols_.size(); ++i) {
      if (cols_[i].var.name == name) return static_cast<int>(i);
    }
    return -1;
  }

  bool is_missing(int row, int col) const {
    const Column& c = cols_[col];
    return c.continuous ? std::isnan(c.reals[row]) : c.codes[row] == kMissing;
  }

  // State index of a categorical cell; kMissing for absent values.
  int code(int row, int col) const { return cols_[col].codes[row]; }
  double real(int row, int col) const { return cols_[col].reals[row]; }

  void add_categorical_column(Variable var, std::vector<int> codes);
  void add_continuous_column(std::string name, std::vector<double> values);

  // New table restricted to `rows` (in the given order) and `cols`.
  DataTable select(const std::vector<int>& rows,
                   const std::vector<int>& cols) const;
  DataTable select_rows(const std::vector<int>& rows) const;

  long long missing_cell_count() const;
  bool has_missing() const { return missing_cell_count() > 0; }

  // Asserts the per-column invariants (code ranges, equal lengths).
  void validate() const;

 private:
  std::vector<Column> cols_;
  int n_rows_ = 0;
};

}  // namespace fbne
