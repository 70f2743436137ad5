#pragma once

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "hsvar/dataset.hpp"
#include "hsvar/errors.hpp"

namespace hsvar {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::string> dates;  // empty when there is no date column
  Matrix values;                   // rows x numeric columns
  bool has_dates = false;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    s = (a == std::string::npos) ? std::string() : s.substr(a, b - a + 1);
  }
  return out;
}

inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

}  // namespace detail

inline CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("read_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("read_csv: empty file " + path);
  CsvTable table;
  std::vector<std::string> header = detail::split_csv_line(line);
  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = detail::split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError("read_csv: row " + std::to_string(line_no) + " has " +
                       std::to_string(cells.size()) + " cells, expected " +
                       std::to_string(header.size()));
    if (rows.empty() && table.dates.empty()) {
      // decide on a leading date column from the first data row
      double probe;
      table.has_dates = !detail::parse_double(cells[0], probe);
    }
    std::vector<double> row;
    for (size_t c = table.has_dates ? 1 : 0; c < cells.size(); ++c) {
      if (cells[c].empty())
        throw MissingValue("read_csv: missing cell at row " + std::to_string(line_no) +
                           ", column " + std::to_string(c + 1));
      double v;
      if (!detail::parse_double(cells[c], v))
        throw ParseError("read_csv: bad number '" + cells[c] + "' at row " +
                         std::to_string(line_no) + ", column " + std::to_string(c + 1));
      row.push_back(v);
    }
    if (table.has_dates) table.dates.push_back(cells[0]);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("read_csv: no data rows in " + path);
  if (table.has_dates) header.erase(header.begin());
  table.header = std::move(header);
  table.values = Matrix(rows.size(), rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c)
      table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  return table;
}

// Re-emit a table with enough digits that the numeric payload round-trips
// bit-exactly.
inline void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path);
  if (!out) throw ParseError("write_csv: cannot open " + path + " for writing");
  out << std::setprecision(17);
  if (table.has_dates) out << "date,";
  for (size_t c = 0; c < table.header.size(); ++c)
    out << table.header[c] << (c + 1 < table.header.size() ? "," : "\n");
  for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
    if (table.has_dates) out << table.dates[static_cast<size_t>(r)] << ",";
    for (Eigen::Index c = 0; c < table.values.cols(); ++c)
      out << table.values(r, c) << (c + 1 < table.values.cols() ? "," : "\n");
  }
}

// Resolve a break specifier: either a 1-based row index among the data rows
// (the last row of the first regime), or a date string matched against the
// date column (the first row at or past the date opens the second regime).
inline int resolve_break_row(const CsvTable& table, const std::string& spec) {
  int row = 0;
  bool is_int = !spec.empty();
  for (char ch : spec)
    if (!std::isdigit(static_cast<unsigned char>(ch))) is_int = false;
  if (is_int) {
    row = std::stoi(spec);
  } else {
    if (!table.has_dates)
      throw BreakOutOfRange("break: date specifier '" + spec + "' needs a date column");
    int idx = -1;
    for (size_t i = 0; i < table.dates.size(); ++i) {
      if (table.dates[i] >= spec) {
        idx = static_cast<int>(i);
        break;
      }
    }
    if (idx <= 0) throw BreakOutOfRange("break: date '" + spec + "' outside the sample");
    row = idx;  // 1-based index of the last pre-break row
  }
  if (row < 1 || row > static_cast<int>(table.values.rows()))
    throw BreakOutOfRange("break: row " + std::to_string(row) + " outside the file");
  return row;
}

// Build the dataset: the first `lag_order` rows are the presample, the rest
// the estimation sample, and the break row becomes the regime boundary.
inline Dataset ingest_csv(const std::string& path, int lag_order, const std::string& break_spec) {
  const CsvTable table = read_csv(path);
  if (lag_order < 1) throw ValidationError("ingest_csv: lag order must be >= 1");
  const int rows = static_cast<int>(table.values.rows());
  if (rows <= lag_order + 2)
    throw ValidationError("ingest_csv: too few rows for lag order " + std::to_string(lag_order));
  const int break_row = resolve_break_row(table, break_spec);
  Dataset data;
  data.lag_order = lag_order;
  data.variable_names = table.header;
  data.presample = table.values.topRows(lag_order).transpose();
  data.observations = table.values.bottomRows(rows - lag_order).transpose();
  data.break_index = break_row - lag_order;
  if (!(data.break_index > 1 && data.break_index < data.n_obs()))
    throw BreakOutOfRange("ingest_csv: break at row " + std::to_string(break_row) +
                          " leaves regime boundary outside (1, T)");
  data.validate();
  return data;
}

}  // namespace hsvar
