#include "oment/csv.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "oment/config.hpp"

namespace oment {

CsvWriter::CsvWriter(std::vector<std::string> header)
    : header_(std::move(header)) {
  if (header_.empty()) {
    throw std::domain_error("CsvWriter: header must not be empty");
  }
}

void CsvWriter::add_row(const std::vector<double>& row) {
  if (row.size() != header_.size()) {
    throw std::domain_error("CsvWriter: row width " +
                            std::to_string(row.size()) +
                            " does not match header width " +
                            std::to_string(header_.size()));
  }
  for (double v : row) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(
          "CsvWriter: refusing to serialize non-finite value in row " +
          std::to_string(rows_.size()));
    }
  }
  rows_.push_back(row);
}

std::string CsvWriter::serialize() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) out << ",";
    out << header_[i];
  }
  out << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << format_double(row[i]);
    }
    out << "\n";
  }
  return out.str();
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("CsvWriter: cannot open output file: " + path);
  }
  out << serialize();
  if (!out) {
    throw std::runtime_error("CsvWriter: write failure for: " + path);
  }
}

}  // namespace oment
