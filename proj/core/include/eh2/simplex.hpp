#pragma once

#include <string>
#include <vector>

#include "eh2/lp.hpp"

namespace eh2 {

// Bounded-variable revised simplex, minimization. The basis inverse is kept
// as a sparse LU factorization plus a product-form eta file that is rebuilt
// every refactor_interval pivots.
enum class SolveStatus {
  optimal,
  infeasible,
  unbounded,
  iteration_limit,
  numerical_error,
};

const char* to_string(SolveStatus s);

// devex approximates reference-framework weights with cheap updates;
// steepest_edge maintains exact column norms at one extra ftran per pivot
// but prices far better on degenerate problems.
enum class PricingRule { devex, steepest_edge };

struct SimplexOptions {
  double tol_feas = 1e-7;    // bound violation tolerance on the scaled problem
  double tol_dual = 1e-7;    // reduced cost tolerance
  double tol_pivot = 1e-9;   // smallest acceptable pivot magnitude
  int refactor_interval = 64;
  int max_iterations = 0;    // 0: derived from problem size
  int bland_window = 500;    // degenerate pivots in a row before Bland's rule
  bool scale = true;         // geometric-mean equilibration
  PricingRule pricing = PricingRule::steepest_edge;
  // Relative size of a deterministic cost and slack-range perturbation,
  // restored before the final cleanup. Off by default: it buys nothing on
  // the planning models this repo builds.
  double perturb = 0.0;
  int log_every = 0;         // stderr progress every N iterations, 0 silent
};

struct SolveResult {
  SolveStatus status = SolveStatus::numerical_error;
  double objective = 0.0;
  std::vector<double> x;              // structural variables, original units
  std::vector<double> row_duals;      // per row; >= rows carry nonnegative duals
  std::vector<double> reduced_costs;  // structural columns, original units
  int phase1_iterations = 0;
  int phase2_iterations = 0;
  int refactorizations = 0;
  std::string message;

  bool ok() const { return status == SolveStatus::optimal; }
};

// `hint`, when given, is a bound-feasible starting point (clamped to bounds,
// one value per structural column). Rows it already satisfies cost phase 1
// nothing; a fully feasible hint skips phase 1 outright.
SolveResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts = {},
                     const std::vector<double>* hint = nullptr);

}  // namespace eh2
