#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vendor_json.hpp"

namespace andersonspec::cli {

/// Shortest-exact or fixed-precision decimal rendering, locale-independent.
std::string format_double(double value, int significant_digits = 17);

/// Columnar payload: CSV with a header row, UTF-8, '.' decimal separator.
/// Cells are preformatted strings so the emitted bytes depend only on the
/// data, never on locale or worker count.
class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  Table& cell(const std::string& v);
  Table& cell(double v);
  Table& cell(std::int64_t v);
  Table& cell(std::uint64_t v);
  Table& cell(int v) { return cell(static_cast<std::int64_t>(v)); }
  void end_row();

  void set_precision(int digits) { precision_ = digits; }
  std::size_t row_count() const { return rows_.size(); }

  std::string to_csv() const;
  nlohmann::json to_json() const;
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  std::vector<std::string> pending_;
  int precision_ = 17;
};

}  // namespace andersonspec::cli
