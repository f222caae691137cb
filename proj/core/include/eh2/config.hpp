#pragma once

#include <map>
#include <string>
#include <vector>

#include "eh2/formulation.hpp"
#include "eh2/scenario.hpp"
#include "eh2/simplex.hpp"
#include "eh2/system.hpp"
#include "eh2/timeline.hpp"

namespace eh2 {

// Loads a dataset directory (or a system.json path directly). Hourly series
// come from the CSV files referenced by the JSON, resolved relative to it.
// Catalog units are converted here: capex and FOM stay on the $/kW basis the
// model uses, p2h techs declared with capex_basis "input_electric" are
// rebased to H2 output, and natural-gas emission intensities are derived
// from heat rates and the capture fraction when not given explicitly.
SystemSpec load_system(const std::string& path);

struct RunConfig {
  std::string system_path;  // dataset dir or system.json, relative to the config file
  std::string output_dir = "out";
  TimelineOptions timeline;
  SimplexOptions solver;
  FormulationOptions formulation;

  // Scenario axes, expanded as a Cartesian product by expand_scenarios().
  // Empty axes contribute the base value only.
  std::vector<double> co2_prices;
  std::vector<double> h2_demand_multipliers;
  std::vector<double> pipeline_capex_multipliers;
  std::vector<double> gas_prices;
  // tech id -> capex values to sweep, $/kW in the tech's catalog quote basis
  // (so electrolyzers declared input_electric sweep $/kW of electric input)
  std::map<std::string, std::vector<double>> gen_capex_axes;
};

RunConfig load_run_config(const std::string& path);

// The Cartesian product of the configured axes as runnable scenarios, named
// by their coordinates ("co2=100/h2x=2"). An empty config yields the single
// base scenario.
std::vector<ScenarioSpec> expand_scenarios(const RunConfig& rc);

// CO2 content of burning natural gas, tonne per MMBTU (HHV accounting).
inline constexpr double kGasEmissionsTonnePerMmbtu = 0.05306;

}  // namespace eh2
