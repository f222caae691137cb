#include "eh2/lp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace eh2 {

const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::gen_capacity: return "gen_capacity";
    case VarKind::vre_bin_capacity: return "vre_bin_capacity";
    case VarKind::storage_power: return "storage_power";
    case VarKind::storage_energy: return "storage_energy";
    case VarKind::gen_output: return "gen_output";
    case VarKind::vre_output: return "vre_output";
    case VarKind::commit_level: return "commit_level";
    case VarKind::startup: return "startup";
    case VarKind::shutdown: return "shutdown";
    case VarKind::charge: return "charge";
    case VarKind::discharge: return "discharge";
    case VarKind::inventory: return "inventory";
    case VarKind::truck_count: return "truck_count";
    case VarKind::trucks_at_zone: return "trucks_at_zone";
    case VarKind::trucks_in_transit: return "trucks_in_transit";
    case VarKind::truck_departure: return "truck_departure";
    case VarKind::truck_load: return "truck_load";
    case VarKind::truck_unload: return "truck_unload";
    case VarKind::truck_station_capacity: return "truck_station_capacity";
    case VarKind::pipeline_units: return "pipeline_units";
    case VarKind::pipeline_flow: return "pipeline_flow";
    case VarKind::linepack_inventory: return "linepack_inventory";
    case VarKind::line_capacity_add: return "line_capacity_add";
    case VarKind::line_flow: return "line_flow";
    case VarKind::nse_power: return "nse_power";
    case VarKind::nse_h2: return "nse_h2";
  }
  return "?";
}

const char* to_string(RowKind k) {
  switch (k) {
    case RowKind::power_balance: return "power_balance";
    case RowKind::h2_balance: return "h2_balance";
    case RowKind::vre_availability: return "vre_availability";
    case RowKind::vre_weekly_budget: return "vre_weekly_budget";
    case RowKind::storage_balance: return "storage_balance";
    case RowKind::storage_year_closure: return "storage_year_closure";
    case RowKind::storage_charge_limit: return "storage_charge_limit";
    case RowKind::storage_discharge_limit: return "storage_discharge_limit";
    case RowKind::storage_energy_limit: return "storage_energy_limit";
    case RowKind::commit_capacity: return "commit_capacity";
    case RowKind::commit_transition: return "commit_transition";
    case RowKind::output_min_stable: return "output_min_stable";
    case RowKind::output_commit_limit: return "output_commit_limit";
    case RowKind::ramp_up: return "ramp_up";
    case RowKind::ramp_down: return "ramp_down";
    case RowKind::truck_state_balance: return "truck_state_balance";
    case RowKind::truck_transit_balance: return "truck_transit_balance";
    case RowKind::truck_conservation: return "truck_conservation";
    case RowKind::truck_station_limit: return "truck_station_limit";
    case RowKind::pipeline_flow_limit: return "pipeline_flow_limit";
    case RowKind::linepack_limit: return "linepack_limit";
    case RowKind::linepack_balance: return "linepack_balance";
    case RowKind::line_flow_limit: return "line_flow_limit";
    case RowKind::vre_bin_limit: return "vre_bin_limit";
  }
  return "?";
}

const char* to_string(RowSense s) {
  switch (s) {
    case RowSense::le: return "<=";
    case RowSense::eq: return "=";
    case RowSense::ge: return ">=";
  }
  return "?";
}

std::string coord_label(const Coord& c) {
  std::ostringstream os;
  bool first = true;
  auto field = [&](const char* name, int v) {
    if (v < 0) return;
    os << (first ? "[" : ",") << name << "=" << v;
    first = false;
  };
  field("e", c.entity);
  field("z", c.zone);
  field("r", c.route);
  field("d", c.dir);
  field("s", c.state);
  field("w", c.week);
  field("h", c.hour);
  if (!first) os << "]";
  return os.str();
}

int LinearProgram::add_column(VarKind kind, Coord coord, double lb, double ub, double obj_coef) {
  obj_.push_back(obj_coef);
  lb_.push_back(lb);
  ub_.push_back(ub);
  col_kinds_.push_back(kind);
  col_coords_.push_back(coord);
  return n_cols() - 1;
}

int LinearProgram::begin_row(RowKind kind, Coord coord, RowSense sense, double rhs) {
  rhs_.push_back(rhs);
  senses_.push_back(sense);
  row_kinds_.push_back(kind);
  row_coords_.push_back(coord);
  return n_rows() - 1;
}

void LinearProgram::coef(int col, double value) {
  if (value == 0.0) return;
  rows_.push_back(n_rows() - 1);
  cols_.push_back(col);
  vals_.push_back(value);
}

void LinearProgram::add_objective(int col, double value) { obj_[col] += value; }

std::string LinearProgram::col_label(int j) const {
  return std::string(to_string(col_kinds_[j])) + coord_label(col_coords_[j]);
}

std::string LinearProgram::row_label(int i) const {
  return std::string(to_string(row_kinds_[i])) + coord_label(row_coords_[i]);
}

void LinearProgram::finalize() {
  if (finalized_) return;

  for (std::size_t k = 0; k < vals_.size(); ++k) {
    if (rows_[k] < 0 || rows_[k] >= n_rows() || cols_[k] < 0 || cols_[k] >= n_cols())
      throw std::logic_error("LinearProgram: coefficient references a missing row or column (" +
                             std::to_string(rows_[k]) + "," + std::to_string(cols_[k]) + ")");
    if (!std::isfinite(vals_[k]))
      throw std::logic_error("LinearProgram: non-finite coefficient in row " +
                             row_label(rows_[k]));
  }
  for (int j = 0; j < n_cols(); ++j) {
    if (!std::isfinite(obj_[j]))
      throw std::logic_error("LinearProgram: non-finite objective on " + col_label(j));
    if (lb_[j] > ub_[j])
      throw std::logic_error("LinearProgram: crossed bounds on " + col_label(j));
  }

  // Rows arrive in construction order; merge duplicates within each row.
  std::vector<std::size_t> count(n_rows() + 1, 0);
  for (int32_t r : rows_) count[r + 1]++;
  for (int i = 0; i < n_rows(); ++i) count[i + 1] += count[i];
  row_start_ = count;

  std::vector<int32_t> new_cols(vals_.size());
  std::vector<double> new_vals(vals_.size());
  {
    std::vector<std::size_t> cursor(row_start_.begin(), row_start_.end() - 1);
    for (std::size_t k = 0; k < vals_.size(); ++k) {
      const std::size_t pos = cursor[rows_[k]]++;
      new_cols[pos] = cols_[k];
      new_vals[pos] = vals_[k];
    }
  }

  // Merge duplicates per row with a scatter buffer, preserving first-seen
  // column order for determinism.
  std::vector<double> acc(n_cols(), 0.0);
  std::vector<int32_t> out_rows, out_cols;
  std::vector<double> out_vals;
  out_rows.reserve(vals_.size());
  out_cols.reserve(vals_.size());
  out_vals.reserve(vals_.size());
  std::vector<std::size_t> new_start(n_rows() + 1, 0);
  std::vector<int32_t> touched;
  for (int i = 0; i < n_rows(); ++i) {
    new_start[i] = out_vals.size();
    touched.clear();
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
      if (acc[new_cols[k]] == 0.0) touched.push_back(new_cols[k]);
      acc[new_cols[k]] += new_vals[k];
    }
    for (int32_t c : touched) {
      if (acc[c] != 0.0) {
        out_rows.push_back(i);
        out_cols.push_back(c);
        out_vals.push_back(acc[c]);
      }
      acc[c] = 0.0;
    }
  }
  new_start[n_rows()] = out_vals.size();

  rows_ = std::move(out_rows);
  cols_ = std::move(out_cols);
  vals_ = std::move(out_vals);
  row_start_ = std::move(new_start);
  finalized_ = true;
}

double LinearProgram::row_activity(int i, const std::vector<double>& x) const {
  double a = 0.0;
  for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) a += vals_[k] * x[cols_[k]];
  return a;
}

}  // namespace eh2
