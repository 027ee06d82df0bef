#include "imbreg/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include "imbreg/error.hpp"
#include "imbreg/serialize.hpp"

namespace imbreg {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? cur : trim(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur += c;
    }
  }
  if (quoted) throw DataError("line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(was_quoted ? cur : trim(cur));
  return fields;
}

std::size_t resolve_column(const std::vector<std::string>& header, const std::string& sel) {
  if (const auto it = std::find(header.begin(), header.end(), sel); it != header.end())
    return static_cast<std::size_t>(it - header.begin());
  std::size_t idx = 0;
  const auto res = std::from_chars(sel.data(), sel.data() + sel.size(), idx);
  if (res.ec == std::errc() && res.ptr == sel.data() + sel.size() && idx < header.size())
    return idx;
  throw UsageError("unknown column '" + sel + "'");
}

}  // namespace

bool is_missing_token(const std::string& s) {
  static const std::set<std::string> tokens{"", "NA", "N/A", "na", "NaN", "nan", "null", "NULL", "?"};
  return tokens.count(s) > 0;
}

std::optional<double> parse_number(const std::string& raw) {
  const std::string s = trim(raw);
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  const auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e || !std::isfinite(v)) return std::nullopt;
  return v;
}

CsvTable read_csv(std::istream& in, bool has_header) {
  CsvTable t;
  std::string line;
  std::size_t line_no = 0;
  bool header_done = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_line(line, line_no);
    if (!header_done) {
      header_done = true;
      if (has_header) {
        t.header = std::move(fields);
        continue;
      }
      for (std::size_t i = 0; i < fields.size(); ++i) t.header.push_back(std::to_string(i));
    }
    if (fields.size() != t.header.size())
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(t.header.size()) + " fields, found " +
                      std::to_string(fields.size()));
    t.rows.push_back(std::move(fields));
    t.lines.push_back(line_no);
  }
  if (!header_done) throw DataError("CSV input is empty");
  return t;
}

CsvTable read_csv_file(const std::string& path, bool has_header) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  return read_csv(in, has_header);
}

TabularData to_tabular(const CsvTable& table, const CsvDatasetSpec& spec) {
  const auto& header = table.header;
  const std::size_t target = resolve_column(header, spec.target_column);

  std::vector<std::size_t> features;
  if (spec.feature_columns) {
    for (const auto& sel : *spec.feature_columns) features.push_back(resolve_column(header, sel));
  } else {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (c != target) features.push_back(c);
  }
  if (std::find(features.begin(), features.end(), target) != features.end())
    throw UsageError("target column cannot also be a feature");
  std::set<std::size_t> categorical;
  for (const auto& sel : spec.categorical_columns) categorical.insert(resolve_column(header, sel));
  if (categorical.count(target)) throw UsageError("target column cannot be categorical");

  // Keep rows with no missing value in any used column.
  std::vector<std::size_t> kept;
  TabularData out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    bool missing = is_missing_token(row[target]);
    for (auto c : features) missing = missing || is_missing_token(row[c]);
    if (missing)
      ++out.dropped_rows;
    else
      kept.push_back(r);
  }

  // Category levels in sorted order for a stable column layout.
  std::map<std::size_t, std::vector<std::string>> levels;
  for (auto c : features) {
    if (!categorical.count(c)) continue;
    std::set<std::string> seen;
    for (auto r : kept) seen.insert(table.rows[r][c]);
    levels[c] = {seen.begin(), seen.end()};
  }

  for (auto c : features) {
    if (categorical.count(c))
      for (const auto& level : levels[c]) out.feature_names.push_back(header[c] + "=" + level);
    else
      out.feature_names.push_back(header[c]);
  }

  const auto n = static_cast<Eigen::Index>(kept.size());
  out.features = Matrix::Zero(n, static_cast<Eigen::Index>(out.feature_names.size()));
  out.targets = Vector(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = kept[static_cast<std::size_t>(i)];
    const auto& row = table.rows[r];
    const auto line = std::to_string(table.lines[r]);
    const auto y = parse_number(row[target]);
    if (!y)
      throw DataError("line " + line + ": target column '" + header[target] +
                      "' is not numeric ('" + row[target] + "')");
    out.targets[i] = *y;
    Eigen::Index col = 0;
    for (auto c : features) {
      if (categorical.count(c)) {
        const auto& lv = levels[c];
        const auto pos = std::lower_bound(lv.begin(), lv.end(), row[c]) - lv.begin();
        out.features(i, col + pos) = 1.0;
        col += static_cast<Eigen::Index>(lv.size());
      } else {
        const auto v = parse_number(row[c]);
        if (!v)
          throw DataError("line " + line + ": column '" + header[c] + "' is not numeric ('" +
                          row[c] + "'); mark it categorical to one-hot encode it");
        out.features(i, col++) = *v;
      }
    }
  }
  if (kept.size() < spec.min_rows)
    throw DataError("only " + std::to_string(kept.size()) + " usable rows, need at least " +
                    std::to_string(spec.min_rows));
  return out;
}

void write_dataset_csv(std::ostream& out, const Dataset& d) {
  const auto dim = d.features.cols();
  for (Eigen::Index c = 0; c < dim; ++c) out << 'f' << c << ',';
  out << "target\n";
  for (Eigen::Index r = 0; r < d.features.rows(); ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) out << format_number(d.features(r, c)) << ',';
    out << format_number(d.targets[r]) << '\n';
  }
}

}  // namespace imbreg
