#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fastrd {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_number(double x);

/// Column-ordered text table. Cells are stored preformatted so a missing
/// value can be written as an empty cell.
class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  /// Throws std::invalid_argument when the width differs from the header.
  void add_row(std::vector<std::string> cells);
  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::optional<double>>& values);

  std::string str() const;
  /// Writes str() to `path`, replacing any existing file.
  void write(const std::string& path) const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace fastrd
