#include "eh2/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eh2 {

bool CsvTable::has(const std::string& name) const {
  for (const auto& c : columns)
    if (c == name) return true;
  return false;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return data[i];
  throw std::out_of_range("CSV column not found: " + name);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_csv: cannot open " + path);
  CsvTable t;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error("read_csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::size_t lineno = 1;
  // optional schema tag; files carrying one must carry the version we know
  if (line.rfind("# eh2csv", 0) == 0) {
    if (line != std::string("# ") + kCsvSchemaTag)
      throw std::runtime_error("read_csv: " + path + ": unsupported schema '" + line + "'");
    if (!std::getline(f, line))
      throw std::runtime_error("read_csv: no header after schema line in " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lineno++;
  }
  {
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
  }
  if (t.columns.empty()) throw std::runtime_error("read_csv: no header in " + path);
  t.data.assign(t.columns.size(), {});

  while (std::getline(f, line)) {
    lineno++;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t col = 0, pos = 0;
    while (col < t.columns.size()) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw std::runtime_error("read_csv: " + path + ":" + std::to_string(lineno) +
                                 ": bad value '" + cell + "'");
      t.data[col].push_back(v);
      col++;
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (col != t.columns.size())
      throw std::runtime_error("read_csv: " + path + ":" + std::to_string(lineno) +
                               ": expected " + std::to_string(t.columns.size()) + " fields");
  }
  return t;
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  f << "# " << kCsvSchemaTag << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    f << (i ? "," : "") << table.columns[i];
  f << "\n";
  char buf[40];
  for (std::size_t r = 0; r < table.n_rows(); ++r) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", table.data[c][r]);
      f << (c ? "," : "") << buf;
    }
    f << "\n";
  }
  if (!f) throw std::runtime_error("write_csv: write failed on " + path);
}

}  // namespace eh2
