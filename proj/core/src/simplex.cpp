#include "eh2/simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <limits>

#include "eh2/units.hpp"

namespace eh2 {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::iteration_limit: return "iteration_limit";
    case SolveStatus::numerical_error: return "numerical_error";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Steps at or below this are treated as degenerate for anti-cycling purposes.
constexpr double kTinyStep = 1e-9;

enum class VarState : uint8_t { basic, at_lower, at_upper, free_nonbasic };

struct Eta {
  int pivot_row;
  double pivot_value;
  // entries of the transformed entering column, pivot row excluded
  std::vector<std::pair<int, double>> nz;
};

// Problem in computational form: min c'x, A x + s = b with per-variable
// bounds. Variables 0..n-1 are structural, n..n+m-1 are row slacks.
struct Worker {
  int n = 0;  // structural columns
  int m = 0;  // rows

  // structural matrix, column-wise
  std::vector<int> col_start;
  std::vector<int> row_idx;
  std::vector<double> val;

  std::vector<double> cost;  // size n+m, phase 2 costs (scaled)
  std::vector<double> lb, ub;
  std::vector<double> b;

  std::vector<double> col_scale;  // structural only
  std::vector<double> row_scale;

  std::vector<int> basis;      // basis[p] = variable in basis position p
  std::vector<int> basis_pos;  // variable -> position, -1 if nonbasic
  std::vector<VarState> state;
  std::vector<double> xval;    // size n+m, current values

  // Reduced costs for the current phase. Phase 2 maintains them across
  // pivots and refreshes at refactorizations; phase 1 costs move with the
  // basics, so there they are rebuilt every iteration.
  std::vector<double> dvec;
  bool dvec_valid = false;

  // Pricing weights, never below 1. Devex: reference-framework estimates.
  // Steepest edge: exact 1 + ||B^{-1}a_j||^2, maintained by the
  // Forrest-Goldfarb recurrence.
  std::vector<double> wts;
  double wmax_seen = 1.0;

  std::vector<double> wcol;  // scratch: transformed entering column
  std::vector<double> rho;   // scratch: pivot row of the basis inverse
  std::vector<double> tau;   // scratch: B^{-1} rho for steepest edge

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  Eigen::VectorXd lu_tmp;  // reused across solves to avoid per-call allocation
  std::vector<Eta> etas;
  int refactorizations = 0;
  int phase1_iterations = 0;
  int phase2_iterations = 0;

  SimplexOptions opt;

  bool in_phase1 = false;
  int degenerate_streak = 0;
  bool bland = false;

  void column_axpy(int j, double alpha, std::vector<double>& out) const {
    if (j < n) {
      for (int k = col_start[j]; k < col_start[j + 1]; ++k) out[row_idx[k]] += alpha * val[k];
    } else {
      out[j - n] += alpha;
    }
  }

  double column_dot(int j, const std::vector<double>& y) const {
    if (j >= n) return y[j - n];
    double d = 0.0;
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) d += val[k] * y[row_idx[k]];
    return d;
  }

  // a_j . y and a_j . z in one traversal
  void column_dot2(int j, const std::vector<double>& y, const std::vector<double>& z,
                   double& dy, double& dz) const {
    if (j >= n) {
      dy = y[j - n];
      dz = z[j - n];
      return;
    }
    dy = 0.0;
    dz = 0.0;
    for (int k = col_start[j]; k < col_start[j + 1]; ++k) {
      dy += val[k] * y[row_idx[k]];
      dz += val[k] * z[row_idx[k]];
    }
  }

  bool refactorize() {
    Eigen::SparseMatrix<double> B(m, m);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(m) * 4);
    for (int p = 0; p < m; ++p) {
      const int j = basis[p];
      if (j < n) {
        for (int k = col_start[j]; k < col_start[j + 1]; ++k)
          trip.emplace_back(row_idx[k], p, val[k]);
      } else {
        trip.emplace_back(j - n, p, 1.0);
      }
    }
    B.setFromTriplets(trip.begin(), trip.end());
    B.makeCompressed();
    lu.compute(B);
    if (lu.info() != Eigen::Success) return false;
    etas.clear();
    refactorizations++;
    return true;
  }

  // z <- B^{-1} a, a given dense
  void ftran(std::vector<double>& z) {
    Eigen::Map<Eigen::VectorXd> zv(z.data(), m);
    lu_tmp = lu.solve(zv);
    zv = lu_tmp;
    for (const Eta& e : etas) {
      const double t = z[e.pivot_row] / e.pivot_value;
      if (t != 0.0) {
        for (const auto& [i, w] : e.nz) z[i] -= w * t;
      }
      z[e.pivot_row] = t;
    }
  }

  // y <- B^{-T} v, v given dense
  void btran(std::vector<double>& v) {
    for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
      double acc = v[it->pivot_row];
      for (const auto& [i, w] : it->nz) acc -= w * v[i];
      v[it->pivot_row] = acc / it->pivot_value;
    }
    Eigen::Map<Eigen::VectorXd> vv(v.data(), m);
    lu_tmp = lu.adjoint().solve(vv);
    vv = lu_tmp;
  }

  // Recompute basic values from scratch: x_B = B^{-1}(b - N x_N).
  void recompute_basics() {
    std::vector<double> r = b;
    for (int j = 0; j < n + m; ++j) {
      if (state[j] == VarState::basic) continue;
      if (xval[j] != 0.0) column_axpy(j, -xval[j], r);
    }
    ftran(r);
    for (int p = 0; p < m; ++p) xval[basis[p]] = r[p];
  }

  // Total bound violation of the basics beyond the feasibility tolerance.
  // Must see exactly what phase_cost sees: violations inside the tolerance
  // carry no phase 1 cost, so counting them here would leave phase 1
  // chasing residuals it has no gradient against.
  double infeasibility() const {
    double s = 0.0;
    for (int p = 0; p < m; ++p) {
      const int j = basis[p];
      if (xval[j] < lb[j] - opt.tol_feas) s += lb[j] - opt.tol_feas - xval[j];
      else if (xval[j] > ub[j] + opt.tol_feas) s += xval[j] - ub[j] - opt.tol_feas;
    }
    return s;
  }

  double scaled_objective() const {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += cost[j] * xval[j];
    return s;
  }

  double phase_cost(int j) const {
    if (in_phase1) {
      if (state[j] != VarState::basic) return 0.0;
      if (xval[j] < lb[j] - opt.tol_feas) return -1.0;
      if (xval[j] > ub[j] + opt.tol_feas) return 1.0;
      return 0.0;
    }
    return cost[j];
  }

  void compute_dvec() {
    std::vector<double>& y = rho;  // safe: rho is only live inside a pivot
    for (int p = 0; p < m; ++p) y[p] = phase_cost(basis[p]);
    btran(y);
    for (int j = 0; j < n + m; ++j)
      dvec[j] = (state[j] == VarState::basic) ? 0.0 : phase_cost(j) - column_dot(j, y);
    dvec_valid = true;
  }

  // Entering candidate by Devex score d^2 / weight, or the lowest eligible
  // index under Bland's rule. dir is +1 (increase) or -1 (decrease).
  int price(int& dir) const {
    int q = -1;
    dir = 0;
    double best_score = 0.0;
    for (int j = 0; j < n + m; ++j) {
      const VarState st = state[j];
      if (st == VarState::basic || lb[j] == ub[j]) continue;
      const double d = dvec[j];
      int cand = 0;
      if (d < -opt.tol_dual && (st == VarState::at_lower || st == VarState::free_nonbasic))
        cand = 1;
      else if (d > opt.tol_dual && (st == VarState::at_upper || st == VarState::free_nonbasic))
        cand = -1;
      if (cand == 0) continue;
      if (bland) {
        dir = cand;
        return j;
      }
      const double score = d * d / wts[j];
      if (score > best_score) {
        best_score = score;
        q = j;
        dir = cand;
      }
    }
    return q;
  }

  // One simplex step for the current phase. Returns:
  //   0 no eligible entering column (phase optimal)
  //   1 pivot or bound flip performed
  //  -1 unbounded direction
  //  -2 numerical failure
  int iterate() {
    if (in_phase1 || !dvec_valid) compute_dvec();

    int dir = 0;
    const int q = price(dir);
    if (q < 0) return 0;
    const double dq = dvec[q];

    std::fill(wcol.begin(), wcol.end(), 0.0);
    column_axpy(q, 1.0, wcol);
    ftran(wcol);

    const double t_own = (lb[q] > -kInf && ub[q] < kInf) ? ub[q] - lb[q] : kInf;

    // Blocking bound for basis position p when the entering variable moves
    // by t: basic j changes at rate -dir*w[p]. Feasible basics block at the
    // bound ahead of them; in phase 1 an out-of-range basic blocks where it
    // regains the violated bound (the phase cost has a kink there).
    auto blocking = [&](int p, double& bound, double& rate) -> bool {
      const double wp = wcol[p];
      if (std::abs(wp) <= opt.tol_pivot) return false;
      rate = -dir * wp;
      const int j = basis[p];
      const double x = xval[j];
      if (in_phase1 && x < lb[j] - opt.tol_feas) {
        if (rate <= 0.0) return false;
        bound = lb[j];
      } else if (in_phase1 && x > ub[j] + opt.tol_feas) {
        if (rate >= 0.0) return false;
        bound = ub[j];
      } else if (rate > 0.0) {
        if (ub[j] >= kInf) return false;
        bound = ub[j];
      } else {
        if (lb[j] <= -kInf) return false;
        bound = lb[j];
      }
      return true;
    };

    int leave_pos = -1;
    double t2 = kInf;  // step that lands the winner exactly on its bound
    double leave_bound = 0.0;

    if (bland) {
      // exact smallest ratio, ties to the lowest variable index
      for (int p = 0; p < m; ++p) {
        double bound, rate;
        if (!blocking(p, bound, rate)) continue;
        const double exact = std::max(0.0, (bound - xval[basis[p]]) / rate);
        if (leave_pos < 0 || exact < t2 - 1e-12 ||
            (exact <= t2 + 1e-12 && basis[p] < basis[leave_pos])) {
          leave_pos = p;
          t2 = exact;
          leave_bound = bound;
        }
      }
    } else {
      // Harris-style ratio test. Pass 1 finds the loosest step theta the
      // bounds relaxed by tol_feas allow. Pass 2 takes, among rows whose
      // exact ratio fits under theta and whose pivot is not much smaller
      // than the best available, the one allowing the longest step; that
      // drains ties that would otherwise stall as zero-length pivots.
      // Anyone passed over overshoots its bound by at most tol_feas.
      double theta = kInf;
      for (int p = 0; p < m; ++p) {
        double bound, rate;
        if (!blocking(p, bound, rate)) continue;
        const double slack = (rate > 0.0) ? opt.tol_feas : -opt.tol_feas;
        theta = std::min(theta, std::max(0.0, (bound - xval[basis[p]] + slack) / rate));
      }
      if (theta < kInf) {
        double max_mag = 0.0;
        for (int p = 0; p < m; ++p) {
          double bound, rate;
          if (!blocking(p, bound, rate)) continue;
          const double exact = std::max(0.0, (bound - xval[basis[p]]) / rate);
          if (exact <= theta) max_mag = std::max(max_mag, std::abs(wcol[p]));
        }
        const double mag_floor = 0.1 * max_mag;
        double best_mag = 0.0;
        for (int p = 0; p < m; ++p) {
          double bound, rate;
          if (!blocking(p, bound, rate)) continue;
          const double exact = std::max(0.0, (bound - xval[basis[p]]) / rate);
          if (exact > theta) continue;
          const double mag = std::abs(wcol[p]);
          if (mag < mag_floor) continue;
          if (leave_pos < 0 || exact > t2 + 1e-12 ||
              (exact > t2 - 1e-12 && mag > best_mag)) {
            best_mag = mag;
            leave_pos = p;
            t2 = exact;
            leave_bound = bound;
          }
        }
      }
    }

    if (leave_pos < 0 && t_own >= kInf) return in_phase1 ? -2 : -1;

    const bool flip = t_own <= t2;
    const double t = flip ? t_own : t2;

    if (t != 0.0) {
      for (int p = 0; p < m; ++p)
        if (wcol[p] != 0.0) xval[basis[p]] -= dir * wcol[p] * t;
    }
    if (t > kTinyStep) {
      degenerate_streak = 0;
      bland = false;
    } else if (++degenerate_streak > opt.bland_window) {
      bland = true;  // sticks until a step makes real progress
    }

    if (flip) {
      // The variable lands on its opposite bound; the basis and with it the
      // reduced costs are unchanged, and the sign of dq bars it from
      // re-entering immediately.
      xval[q] = (dir > 0) ? ub[q] : lb[q];
      state[q] = (dir > 0) ? VarState::at_upper : VarState::at_lower;
      return 1;
    }

    xval[q] += dir * t;

    const double alpha_q = wcol[leave_pos];
    std::fill(rho.begin(), rho.end(), 0.0);
    rho[leave_pos] = 1.0;
    btran(rho);

    // Pivot row alpha_j = rho . A_j drives the weight updates and, in
    // phase 2, the incremental reduced costs.
    const double aq2 = alpha_q * alpha_q;
    const double dq_over = dq / alpha_q;
    const int leaving = basis[leave_pos];
    if (opt.pricing == PricingRule::steepest_edge) {
      double gamma_q = 1.0;
      for (int p = 0; p < m; ++p) gamma_q += wcol[p] * wcol[p];
      tau = wcol;
      btran(tau);  // sigma_j = a_j . B^{-T} w gives w_j . w without forming w_j
      for (int j = 0; j < n + m; ++j) {
        if (state[j] == VarState::basic || j == q || lb[j] == ub[j]) continue;
        double aj, sj;
        column_dot2(j, rho, tau, aj, sj);
        if (aj == 0.0) continue;
        if (!in_phase1) dvec[j] -= dq_over * aj;
        const double r = aj / alpha_q;
        wts[j] = std::max(wts[j] - 2.0 * r * sj + r * r * gamma_q, 1.0 + r * r);
      }
      wts[leaving] = std::max(gamma_q / aq2, 1.0 + 1.0 / aq2);
    } else {
      const double gamma = wts[q];
      for (int j = 0; j < n + m; ++j) {
        if (state[j] == VarState::basic || j == q || lb[j] == ub[j]) continue;
        const double aj = column_dot(j, rho);
        if (aj == 0.0) continue;
        if (!in_phase1) dvec[j] -= dq_over * aj;
        const double cand = aj * aj / aq2 * gamma;
        if (cand > wts[j]) {
          wts[j] = cand;
          if (cand > wmax_seen) wmax_seen = cand;
        }
      }
      wts[leaving] = std::max(gamma / aq2, 1.0);
      wmax_seen = std::max(wmax_seen, wts[leaving]);
      if (wmax_seen > 1e7) {
        // weights have drifted far from the reference framework; restart it
        std::fill(wts.begin(), wts.end(), 1.0);
        wmax_seen = 1.0;
      }
    }

    xval[leaving] = leave_bound;  // lands exactly on its blocking bound
    state[leaving] = (lb[leaving] != ub[leaving] && leave_bound == ub[leaving])
                         ? VarState::at_upper
                         : VarState::at_lower;
    state[q] = VarState::basic;
    basis[leave_pos] = q;
    basis_pos[q] = leave_pos;
    basis_pos[leaving] = -1;
    if (!in_phase1) {
      dvec[leaving] = -dq_over;
      dvec[q] = 0.0;
    }

    Eta e;
    e.pivot_row = leave_pos;
    e.pivot_value = alpha_q;
    e.nz.reserve(64);
    for (int p = 0; p < m; ++p)
      if (p != leave_pos && wcol[p] != 0.0) e.nz.emplace_back(p, wcol[p]);
    etas.push_back(std::move(e));
    if (static_cast<int>(etas.size()) >= opt.refactor_interval) {
      if (!refactorize()) return -2;
      recompute_basics();
      dvec_valid = false;  // refresh reduced costs off the new factors
    }
    return 1;
  }
};

double pow2_round(double v) {
  if (v <= 0.0 || !std::isfinite(v)) return 1.0;
  return std::exp2(std::round(std::log2(v)));
}

}  // namespace

SolveResult solve_lp(const LinearProgram& lp, const SimplexOptions& opts,
                     const std::vector<double>* hint) {
  SolveResult res;
  if (!lp.finalized()) {
    res.status = SolveStatus::numerical_error;
    res.message = "LinearProgram must be finalized before solving";
    return res;
  }

  Worker wk;
  wk.opt = opts;
  wk.n = lp.n_cols();
  wk.m = lp.n_rows();
  const int n = wk.n, m = wk.m, N = n + m;

  // build column-wise structural matrix from the row-ordered triplets
  {
    const auto& rows = lp.coef_rows();
    const auto& cols = lp.coef_cols();
    const auto& vals = lp.coef_values();
    wk.col_start.assign(n + 1, 0);
    for (int32_t c : cols) wk.col_start[c + 1]++;
    for (int j = 0; j < n; ++j) wk.col_start[j + 1] += wk.col_start[j];
    wk.row_idx.resize(vals.size());
    wk.val.resize(vals.size());
    std::vector<int> cursor(wk.col_start.begin(), wk.col_start.end() - 1);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      const int pos = cursor[cols[k]]++;
      wk.row_idx[pos] = rows[k];
      wk.val[pos] = vals[k];
    }
  }

  // geometric-mean equilibration, factors rounded to powers of two
  wk.row_scale.assign(m, 1.0);
  wk.col_scale.assign(n, 1.0);
  if (opts.scale && !wk.val.empty()) {
    std::vector<double> rmin(m), rmax(m), cmin(n), cmax(n);
    for (int pass = 0; pass < 4; ++pass) {
      std::fill(rmin.begin(), rmin.end(), kInf);
      std::fill(rmax.begin(), rmax.end(), 0.0);
      for (int j = 0; j < n; ++j) {
        for (int k = wk.col_start[j]; k < wk.col_start[j + 1]; ++k) {
          const double a = std::abs(wk.val[k]) * wk.col_scale[j] * wk.row_scale[wk.row_idx[k]];
          if (a > 0.0) {
            rmin[wk.row_idx[k]] = std::min(rmin[wk.row_idx[k]], a);
            rmax[wk.row_idx[k]] = std::max(rmax[wk.row_idx[k]], a);
          }
        }
      }
      for (int i = 0; i < m; ++i)
        if (rmax[i] > 0.0) wk.row_scale[i] /= std::sqrt(rmin[i] * rmax[i]);
      std::fill(cmin.begin(), cmin.end(), kInf);
      std::fill(cmax.begin(), cmax.end(), 0.0);
      for (int j = 0; j < n; ++j) {
        for (int k = wk.col_start[j]; k < wk.col_start[j + 1]; ++k) {
          const double a = std::abs(wk.val[k]) * wk.col_scale[j] * wk.row_scale[wk.row_idx[k]];
          if (a > 0.0) {
            cmin[j] = std::min(cmin[j], a);
            cmax[j] = std::max(cmax[j], a);
          }
        }
      }
      for (int j = 0; j < n; ++j)
        if (cmax[j] > 0.0) wk.col_scale[j] /= std::sqrt(cmin[j] * cmax[j]);
    }
    for (int i = 0; i < m; ++i) wk.row_scale[i] = pow2_round(wk.row_scale[i]);
    for (int j = 0; j < n; ++j) wk.col_scale[j] = pow2_round(wk.col_scale[j]);
    for (int j = 0; j < n; ++j) {
      for (int k = wk.col_start[j]; k < wk.col_start[j + 1]; ++k)
        wk.val[k] *= wk.col_scale[j] * wk.row_scale[wk.row_idx[k]];
    }
  }

  // scaled bounds, costs, rhs; slacks encode the row sense
  auto scale_bound = [](double v, double s) {
    if (v >= kUnbounded) return kInf;
    if (v <= -kUnbounded) return -kInf;
    return v / s;
  };
  wk.cost.assign(N, 0.0);
  wk.lb.resize(N);
  wk.ub.resize(N);
  for (int j = 0; j < n; ++j) {
    wk.cost[j] = lp.objective()[j] * wk.col_scale[j];
    wk.lb[j] = scale_bound(lp.lower_bounds()[j], wk.col_scale[j]);
    wk.ub[j] = scale_bound(lp.upper_bounds()[j], wk.col_scale[j]);
  }
  wk.b.resize(m);
  for (int i = 0; i < m; ++i) {
    wk.b[i] = lp.rhs()[i] * wk.row_scale[i];
    const int sj = n + i;
    switch (lp.senses()[i]) {
      case RowSense::le: wk.lb[sj] = 0.0; wk.ub[sj] = kInf; break;
      case RowSense::ge: wk.lb[sj] = -kInf; wk.ub[sj] = 0.0; break;
      case RowSense::eq: wk.lb[sj] = 0.0; wk.ub[sj] = 0.0; break;
    }
  }

  // Deterministic perturbation, undone at the first cleanup so the final
  // rounds polish against the true problem. Costs get a relative jiggle to
  // break pricing ties. Slack bounds are pushed outward by a hair over the
  // feasibility tolerance, which turns every row into a slightly ranged one
  // with a generic width; that spreads the ratio-test ties that otherwise
  // stall the walk across degenerate vertices as zero-length pivots.
  // Structural bounds stay exact so a feasible hint stays feasible.
  std::vector<double> cost_true, lb_true, ub_true;
  bool perturbed = false;
  if (opts.perturb > 0.0) {
    cost_true = wk.cost;
    lb_true = wk.lb;
    ub_true = wk.ub;
    perturbed = true;
    std::mt19937_64 rng(0x9c0ffee5u);
    auto u01 = [&rng] { return 0.5 + 0.5 * ((rng() >> 11) * 0x1.0p-53); };
    for (int j = 0; j < n; ++j)
      wk.cost[j] += opts.perturb * (1.0 + std::abs(wk.cost[j])) * u01();
    const double spread = 10.0 * opts.tol_feas;
    for (int j = n; j < N; ++j) {
      if (wk.lb[j] > -kInf) wk.lb[j] -= spread * u01();
      if (wk.ub[j] < kInf) wk.ub[j] += spread * u01();
    }
  }

  // Initial point: slacks basic; structurals at a bound, the hint picking
  // which one (values between bounds snap to the nearer side). Free columns
  // keep the hinted value outright, a nonbasic needs no bound to sit on.
  wk.basis.resize(m);
  wk.basis_pos.assign(N, -1);
  wk.state.assign(N, VarState::at_lower);
  wk.xval.assign(N, 0.0);
  const bool use_hint = hint && static_cast<int>(hint->size()) == n;
  for (int j = 0; j < n; ++j) {
    const double l = wk.lb[j], u = wk.ub[j];
    if (l <= -kInf && u >= kInf) {
      wk.state[j] = VarState::free_nonbasic;
      wk.xval[j] = use_hint ? (*hint)[j] / wk.col_scale[j] : 0.0;
      continue;
    }
    bool upper = l <= -kInf;  // only choice when the lower bound is open
    if (use_hint && l > -kInf && u < kInf) {
      const double v = (*hint)[j] / wk.col_scale[j];
      upper = (u - v) < (v - l);
    }
    wk.state[j] = upper ? VarState::at_upper : VarState::at_lower;
    wk.xval[j] = upper ? u : l;
  }
  for (int i = 0; i < m; ++i) {
    wk.basis[i] = n + i;
    wk.basis_pos[n + i] = i;
    wk.state[n + i] = VarState::basic;
  }
  if (!wk.refactorize()) {
    res.status = SolveStatus::numerical_error;
    res.message = "initial factorization failed";
    return res;
  }
  wk.recompute_basics();
  wk.dvec.assign(N, 0.0);
  wk.wts.assign(N, 1.0);
  if (opts.pricing == PricingRule::steepest_edge) {
    // exact norms for the all-slack basis: B^{-1} a_j = a_j
    for (int j = 0; j < n; ++j) {
      double s = 1.0;
      for (int k = wk.col_start[j]; k < wk.col_start[j + 1]; ++k) s += wk.val[k] * wk.val[k];
      wk.wts[j] = s;
    }
    std::fill(wk.wts.begin() + n, wk.wts.end(), 2.0);
  }
  wk.wcol.assign(m, 0.0);
  wk.rho.assign(m, 0.0);
  wk.tau.assign(m, 0.0);

  const int max_iter = opts.max_iterations > 0 ? opts.max_iterations : 50000 + 40 * N;
  int iter = 0;

  auto finish = [&](SolveStatus st, const char* msg) {
    res.status = st;
    res.message = msg;
    res.phase1_iterations = wk.phase1_iterations;
    res.phase2_iterations = wk.phase2_iterations;
    res.refactorizations = wk.refactorizations;
    return res;
  };
  auto maybe_log = [&](const char* phase) {
    if (opts.log_every > 0 && iter % opts.log_every == 0)
      std::fprintf(stderr, "simplex %s it=%d obj=%.8g inf=%.3g etas=%zu degen=%d%s\n", phase,
                   iter, wk.scaled_objective(), wk.infeasibility(), wk.etas.size(),
                   wk.degenerate_streak, wk.bland ? " bland" : "");
  };

  // Phase 1 drives bound violations of the basics to zero (skipped when the
  // start is already feasible), phase 2 optimizes. The cleanup pass at the
  // bottom refactorizes and re-prices from scratch; anything it finds sends
  // the loop around again.
  for (int attempt = 0;; ++attempt) {
    wk.in_phase1 = true;
    wk.degenerate_streak = 0;
    wk.bland = false;
    while (wk.infeasibility() > 0.0) {
      if (iter++ >= max_iter) return finish(SolveStatus::iteration_limit, "iteration limit in phase 1");
      maybe_log("p1");
      const int rc = wk.iterate();
      if (rc == 0) {
        if (wk.infeasibility() > opts.tol_feas)
          return finish(SolveStatus::infeasible, "");
        break;
      }
      if (rc < 0) return finish(SolveStatus::numerical_error, "phase 1 failed");
      wk.phase1_iterations++;
    }

    wk.in_phase1 = false;
    wk.dvec_valid = false;
    wk.degenerate_streak = 0;
    wk.bland = false;
    while (true) {
      if (iter++ >= max_iter) return finish(SolveStatus::iteration_limit, "iteration limit in phase 2");
      maybe_log("p2");
      const int rc = wk.iterate();
      if (rc == 1) {
        wk.phase2_iterations++;
        continue;
      }
      if (rc == 0) break;
      if (rc == -1) return finish(SolveStatus::unbounded, "");
      return finish(SolveStatus::numerical_error, "phase 2 failed");
    }

    // Clean factorization, then confirm the solution actually holds up.
    // The first pass through here also retires the perturbation: nonbasics
    // snap back onto their true bounds and any damage that does to the
    // basics gets repaired by another round of the loop.
    if (!wk.refactorize()) return finish(SolveStatus::numerical_error, "final factorization failed");
    if (perturbed) {
      wk.cost = cost_true;
      wk.lb = std::move(lb_true);
      wk.ub = std::move(ub_true);
      perturbed = false;
      for (int j = 0; j < N; ++j) {
        if (wk.state[j] == VarState::at_lower) wk.xval[j] = wk.lb[j];
        else if (wk.state[j] == VarState::at_upper) wk.xval[j] = wk.ub[j];
      }
    }
    wk.recompute_basics();
    wk.dvec_valid = false;
    if (wk.infeasibility() <= opts.tol_feas) {
      wk.compute_dvec();
      int dir = 0;
      if (wk.price(dir) < 0) break;  // primal and dual clean: done
    }
    if (attempt >= 4)
      return finish(SolveStatus::numerical_error, "residual infeasibility after cleanup");
  }

  // duals from true costs, then unscale everything
  std::vector<double> y(m);
  for (int p = 0; p < m; ++p) y[p] = wk.cost[wk.basis[p]];
  wk.btran(y);

  res.x.resize(n);
  for (int j = 0; j < n; ++j) res.x[j] = wk.xval[j] * wk.col_scale[j];
  res.row_duals.resize(m);
  for (int i = 0; i < m; ++i) res.row_duals[i] = y[i] * wk.row_scale[i];
  res.reduced_costs.resize(n);
  for (int j = 0; j < n; ++j) {
    double dot = 0.0;
    for (int k = wk.col_start[j]; k < wk.col_start[j + 1]; ++k) {
      const int i = wk.row_idx[k];
      const double orig = wk.val[k] / (wk.col_scale[j] * wk.row_scale[i]);
      dot += orig * res.row_duals[i];
    }
    res.reduced_costs[j] = lp.objective()[j] - dot;
  }

  double obj = 0.0;
  for (int j = 0; j < n; ++j) obj += lp.objective()[j] * res.x[j];
  res.objective = obj;
  res.status = SolveStatus::optimal;
  res.phase1_iterations = wk.phase1_iterations;
  res.phase2_iterations = wk.phase2_iterations;
  res.refactorizations = wk.refactorizations;
  return res;
}

}  // namespace eh2
