#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eh2/formulation.hpp"
#include "eh2/simplex.hpp"
#include "eh2/system.hpp"
#include "eh2/timeline.hpp"

namespace eh2 {

// One point in a parameter sweep. Unset fields leave the base spec alone.
// The timeline is built once from the base spec and shared, so scenarios in
// a grid stay comparable.
struct ScenarioSpec {
  std::string name;
  std::optional<double> co2_price;
  std::optional<double> gas_price;
  std::optional<bool> coupling_enabled;
  std::map<std::string, double> gen_capex_override;  // tech id -> $/kW
  FormulationOptions formulation;
};

// True when the two scenarios describe the same model coordinates (name and
// labeling aside). run_grid uses this to drop duplicates.
bool same_coordinates(const ScenarioSpec& a, const ScenarioSpec& b);

// Deep-copies the base spec and applies the overrides. Throws on unknown tech
// ids or negative multipliers; never mutates the base.
SystemSpec apply_scenario(const SystemSpec& base, const ScenarioSpec& sc);

struct ScenarioResult {
  std::string name;
  SolveStatus status = SolveStatus::numerical_error;
  double objective = 0.0;  // $/yr

  // sector coupling flows, annual
  double power_to_h2_mwh = 0.0;  // electricity into p2h production
  double h2_to_power_mwh = 0.0;  // electricity out of g2p units

  std::map<std::string, double> capacity_by_tech;       // MW, or tonne/h for H2 techs
  std::map<std::string, double> power_output_by_tech;   // MWh/yr, VRE grouped by tech
  std::map<std::string, double> h2_output_by_tech;      // tonne/yr
  std::map<std::string, double> storage_power_by_tech;  // MW or tonne/h
  std::map<std::string, double> storage_energy_by_tech; // MWh or tonne
  std::map<std::string, double> truck_fleet_by_type;    // trucks
  double pipeline_units = 0.0;
  double line_expansion_mw = 0.0;

  double h2_moved_by_pipeline_tonnes = 0.0;  // annual receipts
  double h2_moved_by_truck_tonnes = 0.0;     // annual loaded departures x payload

  // annual cost by category; values sum to the objective
  std::map<std::string, double> cost_breakdown;

  // served demand and flexibility flows, annual
  double power_demand_mwh = 0.0;
  double h2_demand_tonnes = 0.0;
  double storage_charge_mwh = 0.0;      // electricity storage only
  double storage_discharge_mwh = 0.0;
  double storage_charge_h2_tonnes = 0.0;
  double storage_discharge_h2_tonnes = 0.0;
  double transmission_loss_mwh = 0.0;
  double h2_conditioning_mwh = 0.0;  // compression + loading + storage charge power
  double h2_boiloff_tonnes = 0.0;    // storage keep losses + truck transit losses

  double vre_available_mwh = 0.0;  // built capacity x profile, before curtailment
  double vre_output_mwh = 0.0;
  double vre_curtailment = 0.0;  // 1 - output/available, 0 when nothing built

  // Post-solve residual audit over the assembled rows. Balance is the worst
  // relative violation across zonal power/H2 balance rows; truck is the worst
  // absolute violation across the truck stock/transit/conservation rows.
  double max_balance_violation_rel = 0.0;
  double max_truck_violation = 0.0;
  double max_row_violation_rel = 0.0;

  double nse_power_mwh = 0.0;
  double nse_h2_tonnes = 0.0;
  double emissions_tonnes = 0.0;  // = power + h2 sector parts
  double emissions_power_tonnes = 0.0;
  double emissions_h2_tonnes = 0.0;
  double captured_tonnes = 0.0;

  // duals summary: time-averaged marginal prices per zone
  std::map<std::string, double> mean_power_price_by_zone;  // $/MWh
  std::map<std::string, double> mean_h2_price_by_zone;     // $/tonne

  int iterations = 0;
  double solve_seconds = 0.0;
  std::string message;

  bool ok() const { return status == SolveStatus::optimal; }
};

// Raw model + solution for callers that need more than the report (dual
// series export, MPS dumps). Only filled on request.
struct ScenarioArtifacts {
  LinearProgram lp;
  SolveResult sol;
};

ScenarioResult run_scenario(const SystemSpec& base, const ReducedTimeline& tl,
                            const ScenarioSpec& sc, const SimplexOptions& sopt = {},
                            ScenarioArtifacts* artifacts = nullptr);

// Runs the scenarios with up to `jobs` worker threads. Duplicate coordinates
// are dropped (first occurrence wins), so the result count can be smaller
// than the input count. Results come back in input order.
std::vector<ScenarioResult> run_grid(const SystemSpec& base, const ReducedTimeline& tl,
                                     const std::vector<ScenarioSpec>& grid, int jobs = 1,
                                     const SimplexOptions& sopt = {});

struct CoupledComparison {
  ScenarioResult coupled;
  ScenarioResult decoupled;
  double savings() const { return decoupled.objective - coupled.objective; }
  double savings_fraction() const {
    return decoupled.objective > 0.0 ? savings() / decoupled.objective : 0.0;
  }
  double emissions_delta() const {
    return decoupled.emissions_tonnes - coupled.emissions_tonnes;
  }
  double emissions_delta_fraction() const {
    return decoupled.emissions_tonnes > 0.0 ? emissions_delta() / decoupled.emissions_tonnes
                                            : 0.0;
  }
  double vre_delta_fraction() const {
    return decoupled.vre_output_mwh > 0.0
               ? (coupled.vre_output_mwh - decoupled.vre_output_mwh) / decoupled.vre_output_mwh
               : 0.0;
  }
};

// Same system solved with and without the p2h/g2p technologies on an
// identical timeline. Decoupled is a restriction of coupled, so savings are
// nonnegative up to solver tolerance.
CoupledComparison coupled_vs_decoupled(const SystemSpec& base, const ReducedTimeline& tl,
                                       const ScenarioSpec& sc = {},
                                       const SimplexOptions& sopt = {});

// How the hydrogen sector participates in the power system, from the ratio
// of electricity consumed by p2h to electricity returned by g2p. The factor
// for "order of magnitude" is a parameter rather than a constant.
enum class CouplingRegime { inactive, generator, storage, flexible_demand };
const char* to_string(CouplingRegime r);
CouplingRegime classify_regime(double power_to_h2_mwh, double h2_to_power_mwh,
                               double order_of_magnitude = 10.0, double zero_tol = 1e-6);

// Cost of abating one tonne of CO2 by switching production from `dirty` to
// `clean` at the given utilization: the levelized cost gap (CO2 price
// excluded) divided by the emissions gap.
double abatement_cost(const GenTech& dirty, const GenTech& clean, const Policy& policy,
                      double utilization);

// reporting
std::string result_to_json(const ScenarioResult& r);
std::string results_to_csv(const std::vector<ScenarioResult>& rs);  // tidy long format

}  // namespace eh2
