#include "fbne/csv.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "fbne/errors.hpp"

namespace fbne {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(field);
      field.clear();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  fields.push_back(field);
  return fields;
}

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

bool is_missing_token(const std::string& s) { return s.empty() || s == "?"; }

bool parse_number(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

}  // namespace

DataTable parse_csv(std::istream& in, const std::string& source_name,
                    const SchemaHints& hints) {
  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(source_name + ": empty file");
  }
  const std::vector<std::string> raw_headers = split_line(line);
  std::vector<std::string> headers;
  headers.reserve(raw_headers.size());
  for (const auto& h : raw_headers) headers.push_back(trimmed(h));
  const std::size_t n_cols = headers.size();
  for (std::size_t i = 0; i < n_cols; ++i) {
    for (std::size_t j = i + 1; j < n_cols; ++j) {
      if (headers[i] == headers[j]) {
        throw FormatError(source_name + ": duplicate column '" + headers[i] +
                          "'");
      }
    }
  }

  std::vector<std::vector<std::string>> cells(n_cols);
  int row_number = 1;
  while (std::getline(in, line)) {
    ++row_number;
    if (line.empty() && in.eof()) break;
    std::vector<std::string> fields = split_line(line);
    if (fields.size() != n_cols) {
      throw FormatError(source_name + ": row " + std::to_string(row_number) +
                        " has " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(n_cols));
    }
    for (std::size_t c = 0; c < n_cols; ++c) {
      cells[c].push_back(trimmed(fields[c]));
    }
  }
  if (cells.empty() || cells[0].empty()) {
    throw FormatError(source_name + ": no data rows");
  }
  const std::size_t n_rows = cells[0].size();

  DataTable table;
  for (std::size_t c = 0; c < n_cols; ++c) {
    bool any_observed = false;
    bool all_numeric = true;
    for (const std::string& tok : cells[c]) {
      if (is_missing_token(tok)) continue;
      any_observed = true;
      double unused;
      if (!parse_number(tok, &unused)) all_numeric = false;
    }
    if (!any_observed) {
      throw FormatError(source_name + ": column '" + headers[c] +
                        "' has no observed values");
    }

    const bool continuous =
        all_numeric && !hints.force_categorical.count(headers[c]);
    if (continuous) {
      std::vector<double> values;
      values.reserve(n_rows);
      for (const std::string& tok : cells[c]) {
        if (is_missing_token(tok)) {
          values.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
          double v;
          parse_number(tok, &v);
          values.push_back(v);
        }
      }
      table.add_continuous_column(headers[c], std::move(values));
    } else {
      // Lexically sorted states for cross-run determinism.
      std::map<std::string, int> index;
      for (const std::string& tok : cells[c]) {
        if (!is_missing_token(tok)) index.emplace(tok, 0);
      }
      Variable var;
      var.name = headers[c];
      for (auto& [label, idx] : index) {
        idx = var.cardinality();
        var.states.push_back(label);
      }
      if (var.cardinality() < 2) {
        // A constant column carries no signal, but a 1-state Variable
        // violates the cardinality invariant, so pad with a never-used
        // complement state.
        var.states.push_back("__other__");
      }
      std::vector<int> codes;
      codes.reserve(n_rows);
      for (const std::string& tok : cells[c]) {
        codes.push_back(is_missing_token(tok) ? kMissing : index[tok]);
      }
      table.add_categorical_column(std::move(var), std::move(codes));
    }
  }
  table.validate();
  return table;
}

DataTable load_csv(const std::string& path, const SchemaHints& hints) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return parse_csv(in, path, hints);
}

void write_csv(const DataTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  for (int c = 0; c < table.n_cols(); ++c) {
    out << (c ? "," : "") << table.column(c).name();
  }
  out << "\n";
  std::ostringstream buf;
  buf.precision(std::numeric_limits<double>::max_digits10);
  for (int r = 0; r < table.n_rows(); ++r) {
    for (int c = 0; c < table.n_cols(); ++c) {
      if (c) out << ",";
      const Column& col = table.column(c);
      if (table.is_missing(r, c)) {
        out << "?";
      } else if (col.continuous) {
        buf.str("");
        buf << col.reals[r];
        out << buf.str();
      } else {
        out << col.var.states[col.codes[r]];
      }
    }
    out << "\n";
  }
}

}  // namespace fbne
