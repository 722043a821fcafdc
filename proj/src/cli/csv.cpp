#include "csv.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace andersonspec::cli {

std::string format_double(double value, int significant_digits) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, significant_digits);
  return std::string(buf, res.ptr);
}

Table& Table::cell(const std::string& v) {
  pending_.push_back(v);
  return *this;
}

Table& Table::cell(double v) {
  pending_.push_back(format_double(v, precision_));
  return *this;
}

Table& Table::cell(std::int64_t v) {
  pending_.push_back(std::to_string(v));
  return *this;
}

Table& Table::cell(std::uint64_t v) {
  pending_.push_back(std::to_string(v));
  return *this;
}

void Table::end_row() {
  if (pending_.size() != header_.size()) throw std::logic_error("Table: row width does not match header");
  rows_.push_back(std::move(pending_));
  pending_.clear();
}

std::string Table::to_csv() const {
  std::string out;
  auto append_row = [&out](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  };
  append_row(header_);
  for (const auto& row : rows_) append_row(row);
  return out;
}

nlohmann::json Table::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : rows_) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < header_.size(); ++i) obj[header_[i]] = row[i];
    rows.push_back(std::move(obj));
  }
  return rows;
}

void Table::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_csv();
}

}  // namespace andersonspec::cli
