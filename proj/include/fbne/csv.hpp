#pragma once

#include <iosfwd>
#include <set>
#include <string>

#include "fbne/data_table.hpp"

namespace fbne {

// Hints for columns whose kind cannot be inferred from the values,
// e.g. a 0/1-coded class column that must stay categorical.
struct SchemaHints {
  std::set<std::string> force_categorical;
};

// Reads a comma-separated file: first row headers, `?` or empty cells
// missing, UTF-8. Columns whose non-missing values all parse as numbers
// become continuous; everything else becomes categorical with states
// taken from the observed distinct values, sorted lexically.
DataTable load_csv(const std::string& path, const SchemaHints& hints = {});
DataTable parse_csv(std::istream& in, const std::string& source_name,
                    const SchemaHints& hints = {});

// Writes a table back out in the same dialect; missing cells become `?`.
void write_csv(const DataTable& table, const std::string& path);

}  // namespace fbne
