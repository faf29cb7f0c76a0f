#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace uwimg {

// Rectangular report of real-valued cells with optional holes (a method
// that could not run, a failed inversion). A "mean" aggregation row over
// populated cells is appended on output.
struct ComparisonTable {
  std::string corner = "row";  // header of the row-name column
  std::vector<std::string> columns;
  std::vector<std::string> rows;
  std::vector<std::vector<std::optional<double>>> cells;  // [row][col]

  void add_row(const std::string& name,
               std::vector<std::optional<double>> values);
  std::optional<double>& cell(size_t row, size_t col);
  std::vector<std::optional<double>> column_means() const;
};

// RFC 4180 CSV. Doubles are printed with enough digits to round-trip
// exactly; absent cells are empty fields.
void write_table_csv(const ComparisonTable& table,
                     const std::filesystem::path& path,
                     bool include_mean_row = true);

// Markdown with aligned columns. With mark_extrema the per-column maximum
// renders bold and the minimum italic.
std::string table_to_markdown(const ComparisonTable& table,
                              bool include_mean_row = true,
                              bool mark_extrema = false,
                              size_t max_rows = 0);

std::string csv_escape(const std::string& field);
std::string format_double(double v);

// Full RFC 4180 parser (quoted fields, escaped quotes, CRLF).
std::vector<std::vector<std::string>> parse_csv(const std::filesystem::path& path);
std::vector<std::vector<std::string>> parse_csv_text(const std::string& text);

}  // namespace uwimg
