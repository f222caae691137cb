#include "eh2/verify.hpp"

#include <cmath>
#include <stdexcept>

#include "eh2/units.hpp"

namespace eh2 {

VerifyReport verify_solution(const LinearProgram& lp, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != lp.n_cols())
    throw std::invalid_argument("verify_solution: solution size does not match column count");
  VerifyReport rep;
  for (int i = 0; i < lp.n_rows(); ++i) {
    const double act = lp.row_activity(i, x);
    const double rhs = lp.rhs()[i];
    double viol = 0.0;
    switch (lp.senses()[i]) {
      case RowSense::le: viol = std::max(0.0, act - rhs); break;
      case RowSense::ge: viol = std::max(0.0, rhs - act); break;
      case RowSense::eq: viol = std::abs(act - rhs); break;
    }
    if (viol > rep.max_row_violation) {
      rep.max_row_violation = viol;
      rep.worst_row = i;
    }
    rep.max_row_violation_rel = std::max(rep.max_row_violation_rel, viol / (1.0 + std::abs(rhs)));
  }
  for (int j = 0; j < lp.n_cols(); ++j) {
    const double lb = lp.lower_bounds()[j];
    const double ub = lp.upper_bounds()[j];
    double viol = 0.0;
    if (!is_unbounded(lb)) viol = std::max(viol, lb - x[j]);
    if (!is_unbounded(ub)) viol = std::max(viol, x[j] - ub);
    rep.max_bound_violation = std::max(rep.max_bound_violation, viol);
  }
  double obj = 0.0;
  for (int j = 0; j < lp.n_cols(); ++j) obj += lp.objective()[j] * x[j];
  rep.objective = obj;
  if (rep.worst_row >= 0) rep.worst_row_label = lp.row_label(rep.worst_row);
  return rep;
}

}  // namespace eh2
