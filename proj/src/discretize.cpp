#include "fbne/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fbne/errors.hpp"

namespace fbne {

int ColumnCuts::bin_of(double value) const {
  // First interval whose upper cut lies above the value.
  int lo = 0, hi = static_cast<int>(cuts.size());
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (value < cuts[mid]) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

// Interval names built from word characters only (letters, digits,
// '_' '.' '-' '+') so they survive a BIF round trip, whose tokens
// cannot contain commas or brackets.
std::vector<std::string> ColumnCuts::bin_labels() const {
  const auto fmt = [](double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
  };
  std::vector<std::string> labels;
  if (cuts.empty()) {
    labels.push_back("all");
    return labels;
  }
  labels.push_back("lt_" + fmt(cuts.front()));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    labels.push_back(fmt(cuts[i]) + "_to_" + fmt(cuts[i + 1]));
  }
  labels.push_back("ge_" + fmt(cuts.back()));
  return labels;
}

namespace {

ColumnCuts fit_column(std::vector<double> values, double min_fraction) {
  ColumnCuts out;
  std::sort(values.begin(), values.end());
  const int n = static_cast<int>(values.size());
  const int min_count =
      static_cast<int>(std::ceil(min_fraction * static_cast<double>(n)));

  bool has_two_distinct = n > 0 && values.front() < values.back();
  if (!has_two_distinct) {
    out.single_bin_warning = true;
    return out;
  }

  // Initial equal-frequency boundaries, snapped forward past ties so a
  // run of equal values never straddles a cut.
  const int target_bins = std::max(2, static_cast<int>(1.0 / min_fraction));
  std::vector<int> boundaries;  // positions p with values[p-1] < values[p]
  for (int b = 1; b < target_bins; ++b) {
    int pos = (b * n) / target_bins;
    while (pos < n && values[pos - 1] == values[pos]) ++pos;
    if (pos >= n) break;
    if (!boundaries.empty() && boundaries.back() == pos) continue;
    boundaries.push_back(pos);
  }

  // Merge undersized bins into the smaller adjacent neighbour until
  // every bin meets the minimum.
  auto bin_sizes = [&]() {
    std::vector<int> sizes;
    int prev = 0;
    for (int b : boundaries) {
      sizes.push_back(b - prev);
      prev = b;
    }
    sizes.push_back(n - prev);
    return sizes;
  };
  while (!boundaries.empty()) {
    const std::vector<int> sizes = bin_sizes();
    int worst = -1;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (sizes[i] < min_count && (worst < 0 || sizes[i] < sizes[worst])) {
        worst = static_cast<int>(i);
      }
    }
    if (worst < 0) break;
    int remove;  // index into boundaries
    if (worst == 0) {
      remove = 0;
    } else if (worst == static_cast<int>(sizes.size()) - 1) {
      remove = static_cast<int>(boundaries.size()) - 1;
    } else {
      const bool left = sizes[worst - 1] <= sizes[worst + 1];
      remove = left ? worst - 1 : worst;
    }
    boundaries.erase(boundaries.begin() + remove);
  }

  for (int b : boundaries) out.cuts.push_back(values[b]);
  return out;
}

}  // namespace

DiscretizationSpec fit_discretizer(const DataTable& table,
                                   double min_fraction) {
  if (table.n_rows() == 0) throw Error("cannot fit discretizer on empty table");
  if (!(min_fraction > 0.0 && min_fraction <= 0.5)) {
    throw Error("min_fraction must lie in (0, 0.5]");
  }
  DiscretizationSpec spec;
  for (int c = 0; c < table.n_cols(); ++c) {
    const Column& col = table.column(c);
    if (!col.continuous) continue;
    std::vector<double> observed;
    observed.reserve(col.reals.size());
    for (double v : col.reals) {
      if (!std::isnan(v)) observed.push_back(v);
    }
    if (observed.empty()) {
      throw Error("column '" + col.var.name + "' has no observed values");
    }
    spec.per_column[col.var.name] = fit_column(std::move(observed),
                                               min_fraction);
  }
  return spec;
}

DataTable apply_discretizer(const DataTable& table,
                            const DiscretizationSpec& spec) {
  DataTable out;
  for (int c = 0; c < table.n_cols(); ++c) {
    const Column& col = table.column(c);
    const auto it = col.continuous ? spec.per_column.find(col.var.name)
                                   : spec.per_column.end();
    if (!col.continuous || it == spec.per_column.end()) {
      if (col.continuous) {
        out.add_continuous_column(col.var.name, col.reals);
      } else {
        out.add_categorical_column(col.var, col.codes);
      }
      continue;
    }
    const ColumnCuts& cuts = it->second;
    Variable var;
    var.name = col.var.name;
    var.states = cuts.bin_labels();
    if (var.cardinality() < 2) var.states.push_back("__other__");
    std::vector<int> codes;
    codes.reserve(col.reals.size());
    for (double v : col.reals) {
      codes.push_back(std::isnan(v) ? kMissing : cuts.bin_of(v));
    }
    out.add_categorical_column(std::move(var), std::move(codes));
  }
  return out;
}

}  // namespace fbne
