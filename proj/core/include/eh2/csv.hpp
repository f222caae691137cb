#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace eh2 {

// Written as "# eh2csv v1" ahead of the header on every emitted file.
// Readers accept plain CSVs too, but reject any other tagged version.
inline constexpr const char* kCsvSchemaTag = "eh2csv v1";

// Numeric CSV with a single header row. Values are stored column-major.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;

  std::size_t n_rows() const { return data.empty() ? 0 : data.front().size(); }
  bool has(const std::string& name) const;
  // Throws std::out_of_range when the column is missing.
  const std::vector<double>& column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

}  // namespace eh2
