#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace pinn {

/// Minimal CSV table: one header row, comma-separated, no quoting. Every
/// file the tools emit goes through this type, and reading it back yields
/// the same cells.
class CsvTable {
 public:
  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  void add_row(std::vector<std::string> row);
  void add_row(const std::vector<double>& values);

  /// Throws InvalidArgument when the column is missing.
  std::size_t column_index(std::string_view name) const;
  std::vector<double> column(std::string_view name) const;

  friend bool operator==(const CsvTable&, const CsvTable&) = default;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

void write_csv(const CsvTable& table, const std::filesystem::path& path);
void write_csv(const CsvTable& table, std::ostream& out);
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace pinn
