#include "uwimg/table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "uwimg/errors.hpp"

namespace uwimg {

void ComparisonTable::add_row(const std::string& name,
                              std::vector<std::optional<double>> values) {
  if (values.size() != columns.size())
    throw InvalidParameter("table row '" + name + "' has " +
                           std::to_string(values.size()) + " cells, expected " +
                           std::to_string(columns.size()));
  rows.push_back(name);
  cells.push_back(std::move(values));
}

std::optional<double>& ComparisonTable::cell(size_t row, size_t col) {
  return cells.at(row).at(col);
}

std::vector<std::optional<double>> ComparisonTable::column_means() const {
  std::vector<std::optional<double>> means(columns.size());
  for (size_t c = 0; c < columns.size(); ++c) {
    double sum = 0.0;
    size_t n = 0;
    for (const auto& row : cells)
      if (row[c]) {
        sum += *row[c];
        ++n;
      }
    if (n > 0) means[c] = sum / double(n);
  }
  return means;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& field) {
  const bool needs_quotes =
      field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write_table_csv(const ComparisonTable& table,
                     const std::filesystem::path& path, bool include_mean_row) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << csv_escape(table.corner);
  for (const auto& col : table.columns) out << ',' << csv_escape(col);
  out << '\n';
  auto emit_row = [&out](const std::string& name,
                         const std::vector<std::optional<double>>& vals) {
    out << csv_escape(name);
    for (const auto& v : vals) {
      out << ',';
      if (v) out << format_double(*v);
    }
    out << '\n';
  };
  for (size_t r = 0; r < table.rows.size(); ++r)
    emit_row(table.rows[r], table.cells[r]);
  if (include_mean_row && !table.rows.empty())
    emit_row("mean", table.column_means());
  if (!out) throw IoError("write failed for " + path.string());
}

namespace {

std::string markdown_cell(double v) {
  char buf[64];
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

std::string table_to_markdown(const ComparisonTable& table,
                              bool include_mean_row, bool mark_extrema,
                              size_t max_rows) {
  std::vector<std::optional<double>> col_max(table.columns.size());
  std::vector<std::optional<double>> col_min(table.columns.size());
  if (mark_extrema) {
    for (size_t c = 0; c < table.columns.size(); ++c)
      for (const auto& row : table.cells)
        if (row[c]) {
          if (!col_max[c] || *row[c] > *col_max[c]) col_max[c] = row[c];
          if (!col_min[c] || *row[c] < *col_min[c]) col_min[c] = row[c];
        }
  }

  const size_t shown = (max_rows > 0 && table.rows.size() > max_rows)
                           ? max_rows
                           : table.rows.size();
  std::vector<std::vector<std::string>> grid;
  grid.push_back({table.corner});
  for (const auto& col : table.columns) grid.back().push_back(col);
  auto push_row = [&](const std::string& name,
                      const std::vector<std::optional<double>>& vals,
                      bool decorate) {
    grid.push_back({name});
    for (size_t c = 0; c < vals.size(); ++c) {
      if (!vals[c]) {
        grid.back().push_back("-");
        continue;
      }
      std::string cell = markdown_cell(*vals[c]);
      if (decorate && mark_extrema && col_max[c] && col_min[c] &&
          *col_max[c] != *col_min[c]) {
        if (*vals[c] == *col_max[c])
          cell = "**" + cell + "**";
        else if (*vals[c] == *col_min[c])
          cell = "*" + cell + "*";
      }
      grid.back().push_back(cell);
    }
  };
  for (size_t r = 0; r < shown; ++r)
    push_row(table.rows[r], table.cells[r], true);
  if (include_mean_row && !table.rows.empty())
    push_row("mean", table.column_means(), false);

  std::vector<size_t> widths(table.columns.size() + 1, 3);
  for (const auto& row : grid)
    for (size_t c = 0; c < row.size(); ++c)
      widths[c] = std::max(widths[c], row[c].size());

  std::ostringstream out;
  for (size_t r = 0; r < grid.size(); ++r) {
    out << '|';
    for (size_t c = 0; c < grid[r].size(); ++c) {
      out << ' ' << grid[r][c]
          << std::string(widths[c] - grid[r][c].size() + 1, ' ') << '|';
    }
    out << '\n';
    if (r == 0) {
      out << '|';
      for (size_t c = 0; c < grid[r].size(); ++c)
        out << ' ' << std::string(widths[c], '-') << " |";
      out << '\n';
    }
  }
  if (shown < table.rows.size())
    out << "(" << table.rows.size() - shown
        << " more rows in the CSV output)\n";
  return out.str();
}

std::vector<std::vector<std::string>> parse_csv_text(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t i = 0;
  auto end_field = [&]() {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&]() {
    end_field();
    rows.push_back(row);
    row.clear();
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\n') {
      if (!field.empty() || !row.empty() || field_started) end_row();
    } else if (ch == '\r') {
      // consumed as part of CRLF
    } else {
      field += ch;
      field_started = true;
    }
    ++i;
  }
  if (in_quotes) throw FormatError("CSV: unterminated quoted field");
  if (!field.empty() || !row.empty() || field_started) end_row();
  return rows;
}

std::vector<std::vector<std::string>> parse_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv_text(buf.str());
}

}  // namespace uwimg
