#include "fbne/data_table.hpp"

#include "fbne/errors.hpp"

namespace fbne {

void DataTable::add_categorical_column(Variable var, std::vector<int> codes) {
  if (!cols_.empty() && static_cast<int>(codes.size()) != n_rows_) {
    throw Error("column '" + var.name + "' length mismatch");
  }
  n_rows_ = static_cast<int>(codes.size());
  Column c;
  c.var = std::move(var);
  c.continuous = false;
  c.codes = std::move(codes);
  cols_.push_back(std::move(c));
}

void DataTable::add_continuous_column(std::string name,
                                      std::vector<double> values) {
  if (!cols_.empty() && static_cast<int>(values.size()) != n_rows_) {
    throw Error("column '" + name + "' length mismatch");
  }
  n_rows_ = static_cast<int>(values.size());
  Column c;
  c.var.name = std::move(name);
  c.continuous = true;
  c.reals = std::move(values);
  cols_.push_back(std::move(c));
}

DataTable DataTable::select(const std::vector<int>& rows,
                            const std::vector<int>& cols) const {
  DataTable out;
  for (int ci : cols) {
    const Column& c = cols_[ci];
    if (c.continuous) {
      std::vector<double> v;
      v.reserve(rows.size());
      for (int r : rows) v.push_back(c.reals[r]);
      out.add_continuous_column(c.var.name, std::move(v));
    } else {
      std::vector<int> v;
      v.reserve(rows.size());
      for (int r : rows) v.push_back(c.codes[r]);
      out.add_categorical_column(c.var, std::move(v));
    }
  }
  out.n_rows_ = static_cast<int>(rows.size());
  return out;
}

DataTable DataTable::select_rows(const std::vector<int>& rows) const {
  std::vector<int> all(cols_.size());
  for (std::size_t i = 0; i < cols_.size(); ++i) all[i] = static_cast<int>(i);
  return select(rows, all);
}

long long DataTable::missing_cell_count() const {
  long long n = 0;
  for (const Column& c : cols_) {
    if (c.continuous) {
      for (double v : c.reals) n += std::isnan(v);
    } else {
      for (int v : c.codes) n += (v == kMissing);
    }
  }
  return n;
}

void DataTable::validate() const {
  for (const Column& c : cols_) {
    if (c.continuous) {
      if (static_cast<int>(c.reals.size()) != n_rows_) {
        throw Error("column '" + c.var.name + "' length mismatch");
      }
      continue;
    }
    c.var.validate();
    if (static_cast<int>(c.codes.size()) != n_rows_) {
      throw Error("column '" + c.var.name + "' length mismatch");
    }
    for (int v : c.codes) {
      if (v != kMissing && (v < 0 || v >= c.var.cardinality())) {
        throw Error("column '" + c.var.name + "' has out-of-range code " +
                    std::to_string(v));
      }
    }
  }
}

}  // namespace fbne
