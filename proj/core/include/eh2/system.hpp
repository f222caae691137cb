#pragma once

#include <string>
#include <vector>

#include "eh2/units.hpp"

// Domain data model for the coupled electricity / hydrogen planning instance.
// All types are plain value types; a SystemSpec is immutable once validated
// and can be shared freely across concurrent scenario evaluations.

namespace eh2 {

using HourlySeries = std::vector<double>;

enum class Sector { power, hydrogen };

enum class Carrier { electricity, hydrogen_gas, hydrogen_liquid };

// How a generation technology couples the two sectors:
//   p2h: consumes electricity to make H2 (electrolysis)
//   g2p: consumes H2 to make electricity (fuel cell, H2 turbine)
// Decoupled runs drop every p2h/g2p technology from the problem.
enum class CouplingRole { none, p2h, g2p };

enum class Fuel { none, natural_gas, uranium, hydrogen };

struct Zone {
  int id = 0;  // 1-based, contiguous
  std::string name;
  bool allows_central_h2_production = true;
  HourlySeries demand_power;  // MW
  HourlySeries demand_h2;     // tonne/h
};

struct Route {
  int from_zone = 0;
  int to_zone = 0;
  double distance_miles = 0.0;
  double existing_power_capacity_mw = 0.0;
  bool power_expansion_allowed = true;
  bool h2_transport_allowed = true;  // trucks/pipelines may use this route
};

struct GenTech {
  std::string id;
  Sector sector = Sector::power;

  // Investment. Power sector: $/kW of electric output. H2 sector: $/kW of
  // H2 output (LHV), i.e. a 1 tonne/h plant is 33,330 kW_H2.
  double capex_per_unit_power = 0.0;
  double fom_per_year = 0.0;  // $/kW-yr, same kW basis as capex
  double lifetime_years = 0.0;

  // Operation.
  double vom = 0.0;  // $/MWh (power) or $/tonne (H2)
  Fuel fuel = Fuel::none;
  double heat_rate_mmbtu_per_mwh = 0.0;  // fuel-burning power techs
  double efficiency_lhv = 0.0;           // H2 techs and G2P, fraction of LHV
  double fuel_price_per_mmbtu = 0.0;     // only for fuels not priced by Policy

  // Residual (emitted) and captured CO2 per unit of output.
  double emissions_intensity = 0.0;  // tonne CO2 / MWh or / tonne H2
  double captured_intensity = 0.0;   // tonne CO2 / MWh or / tonne H2

  bool is_vre = false;  // capacity comes through VreSupplyBin entries

  // Linearized unit commitment.
  bool uc_modelled = false;
  double unit_size = 0.0;  // MW or tonne/h
  double min_stable_fraction = 0.0;
  double ramp_fraction_per_hour = 1.0;

  // MWh_e consumed per unit of output. For p2h techs a value of 0 means
  // "derive from efficiency_lhv" (LHV / eta); for anything else it is an
  // auxiliary load.
  double electricity_input_per_output = 0.0;

  CouplingRole coupling_role = CouplingRole::none;

  // Central plants (SMR-class) are excluded from zones with
  // allows_central_h2_production == false.
  bool requires_central_site = false;

  // True when the catalog quoted capex/FOM per kW of electric input; the
  // stored values are already rebased onto output, but scenario capex
  // overrides arrive in the quoted basis and need the same rebase.
  bool capex_quoted_input_electric = false;
};

struct VreSupplyBin {
  std::string id;       // unique, e.g. "wind_z1_c2"
  std::string tech_id;  // must reference a GenTech with is_vre
  int zone = 0;
  double max_capacity_mw = kUnbounded;
  double interconnection_cost_adder = 0.0;  // $/kW, annuitized with the tech capex
  HourlySeries profile;                     // capacity factor in [0,1]

  // Hydro-style resources: hourly output is capped by installed capacity and
  // the weekly energy budget implied by the profile, instead of the hourly
  // profile itself.
  bool weekly_energy_budget = false;
};

struct StorageTech {
  std::string id;
  Carrier carrier = Carrier::electricity;
  double capex_power_or_flow = 0.0;  // $/kW or $/(tonne/h)
  double capex_energy = 0.0;         // $/kWh or $/tonne
  double fom_per_year = 0.0;         // $/kW-yr on the power/flow basis
  double round_trip_efficiency = 1.0;
  double charge_electricity = 0.0;  // MWh_e per tonne charged (compression/liquefaction)
  double lifetime_years = 0.0;
  double boiloff_per_day = 0.0;  // liquid carrier only
};

struct TruckType {
  std::string id;
  Carrier carrier = Carrier::hydrogen_gas;  // gas or liquid
  double payload_tonne = 0.0;
  double capex_per_truck = 0.0;
  double opex_per_mile = 0.0;           // per truck-trip mile, loaded or empty
  double loading_station_capex = 0.0;   // $/(tonne/h) of loading+unloading throughput
  double loading_electricity = 0.0;     // MWh_e per tonne loaded
  double avg_speed_mph = 35.0;
  double boiloff_per_day = 0.0;  // liquid carrier only, prorated over transit
  double lifetime_years = 0.0;
};

struct PipelineType {
  std::string id;
  double flow_capacity_tonne_per_hour_per_unit = 0.0;
  double capex_per_mile_per_unit = 0.0;
  double compression_capex_per_mile = 0.0;  // $/mile-unit   (row A)
  double compression_capex_fixed = 0.0;     // $/unit        (row B)
  double compression_electricity_per_tonne_mile = 0.0;  // MWh/(tonne-mile), row A
  double compression_electricity_per_tonne = 0.0;       // MWh/tonne, row B
  double lifetime_years = 0.0;
  // Storable tonnes per (tonne/h) of installed flow capacity, i.e. hours of
  // throughput usable as linepack inventory. 0 disables linepack.
  double linepack_fraction = 0.0;
};

struct Policy {
  double co2_price = 0.0;           // $/tonne emitted
  double co2_transport_cost = 0.0;  // $/tonne captured (CCS transport & storage)
  double gas_price = 0.0;           // $/MMBTU
  double discount_rate = 0.07;      // fraction/yr
  double voll_power = 20000.0;      // $/MWh unserved
  double voll_h2 = 1000.0;          // $/kg unserved
  bool coupling_enabled = true;
};

struct TransmissionParams {
  double capex_per_mw_mile = 1600.0;  // $ per MW of new line per mile
  double lifetime_years = 60.0;
  double loss_per_100_miles = 0.01;   // fraction of flow lost per 100 miles
};

struct SystemSpec {
  std::string name;
  std::vector<Zone> zones;
  std::vector<Route> routes;
  std::vector<GenTech> gen_techs;
  std::vector<VreSupplyBin> vre_bins;
  std::vector<StorageTech> storage_techs;
  std::vector<TruckType> truck_types;
  std::vector<PipelineType> pipeline_types;
  Policy policy;
  TransmissionParams transmission;

  int n_zones() const { return static_cast<int>(zones.size()); }
  std::size_t n_hours() const { return zones.empty() ? 0 : zones.front().demand_power.size(); }

  const Zone* find_zone(int id) const;
  const GenTech* find_gen_tech(const std::string& id) const;
  const StorageTech* find_storage_tech(const std::string& id) const;
};

}  // namespace eh2
