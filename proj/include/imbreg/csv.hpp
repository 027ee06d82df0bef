#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "imbreg/empirical.hpp"
#include "imbreg/synth.hpp"

namespace imbreg {

/// Raw rows; `lines[i]` is the 1-based file line of `rows[i]`.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;
};

/// Comma separated, optional double quotes, CRLF tolerated, blank lines
/// skipped. Without a header, columns are named "0", "1", ...
/// Rows whose field count differs from the header throw DataError.
CsvTable read_csv(std::istream& in, bool has_header = true);
CsvTable read_csv_file(const std::string& path, bool has_header = true);

/// Column selectors are names, or zero-based indices when no name matches.
struct CsvDatasetSpec {
  std::string target_column;
  std::optional<std::vector<std::string>> feature_columns;  // default: all but target
  std::vector<std::string> categorical_columns;              // one-hot encoded
  std::size_t min_rows = 10;
};

struct TabularData {
  Matrix features;
  Vector targets;
  std::vector<std::string> feature_names;
  std::size_t dropped_rows = 0;  // rows removed for missing values
};

/// Empty, NA, NaN, null and ? are missing values; such rows are dropped.
/// A non-numeric value in a numeric column throws DataError naming the line.
TabularData to_tabular(const CsvTable& table, const CsvDatasetSpec& spec);

bool is_missing_token(const std::string& s);
std::optional<double> parse_number(const std::string& s);

/// Header f0..f{d-1},target; numbers at 17 significant digits.
void write_dataset_csv(std::ostream& out, const Dataset& d);

}  // namespace imbreg
