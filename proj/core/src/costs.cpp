#include "eh2/costs.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eh2 {

double annuitize(double capex, double lifetime_years, double discount_rate) {
  if (lifetime_years <= 0.0)
    throw std::invalid_argument("annuitize: lifetime must be positive, got " +
                                std::to_string(lifetime_years));
  if (discount_rate < 0.0)
    throw std::invalid_argument("annuitize: negative discount rate");
  if (discount_rate == 0.0) return capex / lifetime_years;
  const double r = discount_rate;
  return capex * r / (1.0 - std::pow(1.0 + r, -lifetime_years));
}

double fuel_mmbtu_per_output(const GenTech& tech) {
  if (tech.fuel == Fuel::none || tech.fuel == Fuel::hydrogen) return 0.0;
  if (tech.sector == Sector::power) return tech.heat_rate_mmbtu_per_mwh;
  // H2 tech burning fuel: thermal input = LHV / eta per tonne of H2.
  if (tech.efficiency_lhv <= 0.0 || tech.efficiency_lhv > 1.0)
    throw std::invalid_argument("fuel_mmbtu_per_output: tech '" + tech.id +
                                "' needs efficiency_lhv in (0,1]");
  return kLhvH2MwhPerTonne / tech.efficiency_lhv * kMmbtuPerMwh;
}

static double fuel_price(const GenTech& tech, const Policy& policy) {
  switch (tech.fuel) {
    case Fuel::natural_gas:
      if (policy.gas_price < 0.0)
        throw std::invalid_argument("missing gas price for fuel-burning tech '" + tech.id + "'");
      return policy.gas_price;
    case Fuel::uranium:
      if (tech.fuel_price_per_mmbtu < 0.0)
        throw std::invalid_argument("missing fuel price for tech '" + tech.id + "'");
      return tech.fuel_price_per_mmbtu;
    default:
      return 0.0;  // hydrogen fuel is priced endogenously via the H2 balance
  }
}

OperatingCoefficients derive_operating_coefficients(const GenTech& tech, const Policy& policy) {
  OperatingCoefficients c;
  c.vom = tech.vom;
  c.fuel = fuel_mmbtu_per_output(tech) * fuel_price(tech, policy);
  c.emissions = tech.emissions_intensity;
  c.captured = tech.captured_intensity;
  c.carbon = policy.co2_price * c.emissions;
  c.co2_transport = policy.co2_transport_cost * c.captured;
  return c;
}

double electricity_input_for_h2(const GenTech& tech, double h2_out_tonnes) {
  if (tech.electricity_input_per_output > 0.0)
    return h2_out_tonnes * tech.electricity_input_per_output;
  if (tech.efficiency_lhv <= 0.0 || tech.efficiency_lhv > 1.0)
    throw std::invalid_argument("electricity_input_for_h2: tech '" + tech.id +
                                "' needs efficiency_lhv in (0,1]");
  return h2_out_tonnes * kLhvH2MwhPerTonne / tech.efficiency_lhv;
}

double levelized_cost_at_utilization(const GenTech& tech, const Policy& policy,
                                     double utilization) {
  if (utilization <= 0.0 || utilization > 1.0)
    throw std::invalid_argument("levelized_cost_at_utilization: utilization must be in (0,1]");

  // Convert the per-kW quotation onto the model's output unit: MW for power
  // techs, tonne/h (= LHV MW of H2) for H2 techs.
  const double kw_per_output_unit =
      tech.sector == Sector::power ? kKwPerMw : kLhvH2MwhPerTonne * kKwPerMw;
  const double annual_capital =
      (annuitize(tech.capex_per_unit_power, tech.lifetime_years, policy.discount_rate) +
       tech.fom_per_year) *
      kw_per_output_unit;
  const double output_per_year = kHoursPerYear * utilization;

  OperatingCoefficients op = derive_operating_coefficients(tech, policy);
  return annual_capital / output_per_year + op.vom + op.fuel + op.co2_transport;
}

}  // namespace eh2
