#pragma once

#include <string>
#include <vector>

#include "eh2/lp.hpp"

namespace eh2 {

struct VerifyReport {
  double max_row_violation = 0.0;       // absolute, worst over all rows
  double max_row_violation_rel = 0.0;   // violation / (1 + |rhs|)
  double max_bound_violation = 0.0;
  double objective = 0.0;
  int worst_row = -1;
  std::string worst_row_label;
};

// Checks a candidate primal point against every row and bound of the LP.
VerifyReport verify_solution(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace eh2
