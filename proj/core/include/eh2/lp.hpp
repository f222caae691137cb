#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace eh2 {

enum class RowSense : uint8_t { le, eq, ge };

// Decision-variable families of the planning problem.
enum class VarKind : uint8_t {
  gen_capacity,
  vre_bin_capacity,
  storage_power,
  storage_energy,
  gen_output,
  vre_output,
  commit_level,
  startup,
  shutdown,
  charge,
  discharge,
  inventory,
  truck_count,
  trucks_at_zone,
  trucks_in_transit,
  truck_departure,
  truck_load,
  truck_unload,
  truck_station_capacity,
  pipeline_units,
  pipeline_flow,
  linepack_inventory,
  line_capacity_add,
  line_flow,
  nse_power,
  nse_h2,
};

enum class RowKind : uint8_t {
  power_balance,
  h2_balance,
  vre_availability,
  vre_weekly_budget,
  storage_balance,
  storage_year_closure,
  storage_charge_limit,
  storage_discharge_limit,
  storage_energy_limit,
  commit_capacity,
  commit_transition,
  output_min_stable,
  output_commit_limit,
  ramp_up,
  ramp_down,
  truck_state_balance,
  truck_transit_balance,
  truck_conservation,
  truck_station_limit,
  pipeline_flow_limit,
  linepack_limit,
  linepack_balance,
  line_flow_limit,
  vre_bin_limit,
};

const char* to_string(VarKind k);
const char* to_string(RowKind k);
const char* to_string(RowSense s);

// Coordinates of a variable or row within the planning instance. Unused axes
// stay -1. `entity` indexes into the relevant catalog vector (gen tech,
// storage tech, truck type, pipeline type, or VRE bin, depending on kind).
struct Coord {
  int16_t entity = -1;
  int16_t zone = -1;   // zone index (0-based position, not zone id)
  int16_t route = -1;  // route index
  int8_t dir = -1;     // 0: from->to, 1: to->from
  int8_t state = -1;   // trucks: 0 loaded / 1 empty; pipeline flows: 0 send / 1 receive
  int16_t week = -1;
  int16_t hour = -1;

  bool operator==(const Coord&) const = default;
};

std::string coord_label(const Coord& c);

// Sparse LP in triplet form, rows and columns annotated for dual extraction
// and reporting. Assembly is row-by-row: begin_row() then coef() calls.
class LinearProgram {
 public:
  int add_column(VarKind kind, Coord coord, double lb, double ub, double obj_coef);

  int begin_row(RowKind kind, Coord coord, RowSense sense, double rhs);
  // Accumulates into the row under construction. Duplicate columns within one
  // row are summed when the matrix is finalized.
  void coef(int col, double value);

  void add_objective(int col, double value);

  int n_cols() const { return static_cast<int>(obj_.size()); }
  int n_rows() const { return static_cast<int>(rhs_.size()); }
  std::size_t n_nonzeros() const { return vals_.size(); }

  const std::vector<double>& objective() const { return obj_; }
  const std::vector<double>& lower_bounds() const { return lb_; }
  const std::vector<double>& upper_bounds() const { return ub_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<RowSense>& senses() const { return senses_; }

  std::vector<double>& mutable_lower_bounds() { return lb_; }
  std::vector<double>& mutable_upper_bounds() { return ub_; }
  std::vector<double>& mutable_objective() { return obj_; }

  VarKind col_kind(int j) const { return col_kinds_[j]; }
  const Coord& col_coord(int j) const { return col_coords_[j]; }
  RowKind row_kind(int i) const { return row_kinds_[i]; }
  const Coord& row_coord(int i) const { return row_coords_[i]; }

  std::string col_label(int j) const;
  std::string row_label(int i) const;

  // Triplets in assembly order (row-major by construction).
  const std::vector<int32_t>& coef_rows() const { return rows_; }
  const std::vector<int32_t>& coef_cols() const { return cols_; }
  const std::vector<double>& coef_values() const { return vals_; }

  // Merges duplicate (row, col) entries and drops exact zeros. Throws
  // std::logic_error on out-of-range indices or non-finite coefficients.
  void finalize();
  bool finalized() const { return finalized_; }

  // Row activity a_i . x for one row; requires finalize() (uses the row
  // pointer built there).
  double row_activity(int i, const std::vector<double>& x) const;
  const std::vector<std::size_t>& row_start() const { return row_start_; }

 private:
  std::vector<double> obj_, lb_, ub_;
  std::vector<VarKind> col_kinds_;
  std::vector<Coord> col_coords_;

  std::vector<double> rhs_;
  std::vector<RowSense> senses_;
  std::vector<RowKind> row_kinds_;
  std::vector<Coord> row_coords_;

  std::vector<int32_t> rows_, cols_;
  std::vector<double> vals_;
  std::vector<std::size_t> row_start_;  // CSR-style offsets, valid after finalize()
  bool finalized_ = false;
};

}  // namespace eh2
