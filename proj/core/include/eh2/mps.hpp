#pragma once

#include <string>
#include <vector>

#include "eh2/lp.hpp"

namespace eh2 {

// LP as read back from an MPS file. Only the numbers survive the format;
// the kind/coordinate annotations live in the sidecar file.
struct MpsModel {
  std::string name;
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> obj;
  std::vector<double> lb, ub;  // kUnbounded sentinels for free directions
  std::vector<int32_t> rows, cols;
  std::vector<double> vals;

  int n_rows() const { return static_cast<int>(rhs.size()); }
  int n_cols() const { return static_cast<int>(obj.size()); }
};

// Free-format MPS (NAME/ROWS/COLUMNS/RHS/BOUNDS/ENDATA), minimization, one
// coefficient pair per line, values printed with %.17g so a round trip
// through the file reproduces every double bit for bit. Rows are named
// R0000001.. in row order, columns C0000001.., objective row OBJ.
// Requires a finalized LP.
void write_mps(const LinearProgram& lp, const std::string& path,
               const std::string& model_name);

// CSV mapping MPS names back to annotated labels: kind,name,label
void write_mps_sidecar(const LinearProgram& lp, const std::string& path);

MpsModel read_mps(const std::string& path);

// Field-by-field equality against the source LP, exact on every coefficient.
// On mismatch returns false and describes the first difference in *why.
bool mps_matches(const LinearProgram& lp, const MpsModel& model, std::string* why);

}  // namespace eh2
