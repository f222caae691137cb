#pragma once

#include "eh2/system.hpp"

namespace eh2 {

// Capital recovery: $/unit-yr for a capex of $/unit over the asset lifetime.
// r = 0 degenerates to straight-line capex / lifetime.
// Throws std::invalid_argument for non-positive lifetime or negative rate.
double annuitize(double capex, double lifetime_years, double discount_rate);

// Per-output marginal cost components of a generation technology, $/MWh for
// power-sector techs and $/tonne for H2-sector techs. Components are kept
// separate so reports can break the objective down by category.
struct OperatingCoefficients {
  double vom = 0.0;
  double fuel = 0.0;           // heat-rate (or LHV/eta) times fuel price
  double carbon = 0.0;         // co2_price x residual emissions
  double co2_transport = 0.0;  // transport cost x captured CO2
  double emissions = 0.0;      // tonne CO2 per unit output (residual)
  double captured = 0.0;       // tonne CO2 per unit output (captured)

  double marginal_cost() const { return vom + fuel + carbon + co2_transport; }
};

// Throws std::invalid_argument when a fuel-burning tech has no usable fuel
// price (negative policy gas price, or missing override for non-gas fuels).
OperatingCoefficients derive_operating_coefficients(const GenTech& tech, const Policy& policy);

// MWh of electricity to produce h2_out tonnes with an electricity-consuming
// H2 tech: h2_out x LHV / efficiency. Uses the explicit
// electricity_input_per_output override when the catalog sets one.
double electricity_input_for_h2(const GenTech& tech, double h2_out_tonnes);

// Fuel burned per unit of output, MMBTU/MWh for power techs and MMBTU/tonne
// for fuel-burning H2 techs (LHV / eta converted to thermal MMBTU).
double fuel_mmbtu_per_output(const GenTech& tech);

// Levelized cost of one unit of output ($/MWh or $/tonne) at the given
// capacity factor, including annuitized capex + FOM, fuel, VOM, and CO2
// transport for the captured share. The CO2 price itself is excluded: the
// abatement-cost comparison prices carbon separately.
double levelized_cost_at_utilization(const GenTech& tech, const Policy& policy,
                                     double utilization);

}  // namespace eh2
