#pragma once

#include <string>
#include <vector>

namespace oment {

// Minimal numeric CSV emitter. Every row must match the header width, and
// every cell must be finite; doubles are rendered with the shortest
// representation that round-trips.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<double>& row);

  std::size_t row_count() const { return rows_.size(); }

  std::string serialize() const;
  void write_file(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<double>> rows_;
};

}  // namespace oment
