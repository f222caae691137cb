#include "eh2/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eh2/costs.hpp"
#include "eh2/csv.hpp"
#include "eh2/units.hpp"
#include "json.hpp"

namespace eh2 {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
  return j;
}

Sector parse_sector(const std::string& s) {
  if (s == "power") return Sector::power;
  if (s == "hydrogen") return Sector::hydrogen;
  throw std::runtime_error("unknown sector: " + s);
}

Carrier parse_carrier(const std::string& s) {
  if (s == "electricity") return Carrier::electricity;
  if (s == "hydrogen_gas") return Carrier::hydrogen_gas;
  if (s == "hydrogen_liquid") return Carrier::hydrogen_liquid;
  throw std::runtime_error("unknown carrier: " + s);
}

CouplingRole parse_coupling(const std::string& s) {
  if (s == "none") return CouplingRole::none;
  if (s == "p2h") return CouplingRole::p2h;
  if (s == "g2p") return CouplingRole::g2p;
  throw std::runtime_error("unknown coupling role: " + s);
}

Fuel parse_fuel(const std::string& s) {
  if (s == "none") return Fuel::none;
  if (s == "natural_gas") return Fuel::natural_gas;
  if (s == "uranium") return Fuel::uranium;
  if (s == "hydrogen") return Fuel::hydrogen;
  throw std::runtime_error("unknown fuel: " + s);
}

GenTech parse_gen_tech(const json& j) {
  GenTech t;
  t.id = j.at("id").get<std::string>();
  t.sector = parse_sector(j.at("sector").get<std::string>());
  t.capex_per_unit_power = j.at("capex_per_kw").get<double>();
  t.fom_per_year = j.value("fom_per_kw_yr", 0.0);
  t.lifetime_years = j.at("lifetime_years").get<double>();
  t.vom = j.value("vom", 0.0);
  t.fuel = parse_fuel(j.value("fuel", std::string("none")));
  t.heat_rate_mmbtu_per_mwh = j.value("heat_rate_mmbtu_per_mwh", 0.0);
  t.efficiency_lhv = j.value("efficiency_lhv", 0.0);
  t.fuel_price_per_mmbtu = j.value("fuel_price_per_mmbtu", 0.0);
  t.is_vre = j.value("is_vre", false);
  t.coupling_role = parse_coupling(j.value("coupling", std::string("none")));
  t.requires_central_site = j.value("requires_central_site", false);
  t.electricity_input_per_output = j.value("electricity_input_per_output", 0.0);

  if (j.contains("uc")) {
    const json& u = j["uc"];
    t.uc_modelled = true;
    t.unit_size = u.value("unit_size", 0.0);
    t.min_stable_fraction = u.value("min_stable_fraction", 0.0);
    t.ramp_fraction_per_hour = u.value("ramp_fraction_per_hour", 1.0);
  }

  // electrolyzer catalogs quote $/kW of electric input; rebase onto H2 output
  const std::string basis = j.value("capex_basis", std::string("output"));
  if (basis == "input_electric") {
    if (t.efficiency_lhv <= 0.0)
      throw std::runtime_error(t.id + ": input_electric basis needs efficiency_lhv");
    t.capex_per_unit_power /= t.efficiency_lhv;
    t.fom_per_year /= t.efficiency_lhv;
    t.capex_quoted_input_electric = true;
  } else if (basis != "output") {
    throw std::runtime_error(t.id + ": unknown capex_basis " + basis);
  }

  if (j.contains("emissions_tco2_per_unit") || j.contains("captured_tco2_per_unit")) {
    t.emissions_intensity = j.value("emissions_tco2_per_unit", 0.0);
    t.captured_intensity = j.value("captured_tco2_per_unit", 0.0);
  } else if (t.fuel == Fuel::natural_gas) {
    const double mmbtu = t.sector == Sector::power
                             ? t.heat_rate_mmbtu_per_mwh
                             : kLhvH2MwhPerTonne / t.efficiency_lhv * kMmbtuPerMwh;
    const double total = mmbtu * kGasEmissionsTonnePerMmbtu;
    const double capture = j.value("capture_fraction", 0.0);
    t.emissions_intensity = total * (1.0 - capture);
    t.captured_intensity = total * capture;
  }
  return t;
}

}  // namespace

SystemSpec load_system(const std::string& path) {
  namespace fs = std::filesystem;
  fs::path p(path);
  if (fs::is_directory(p)) p /= "system.json";
  const json j = load_json(p.string());
  const fs::path dir = p.parent_path();

  const int version = j.value("schema_version", 0);
  if (version != 1)
    throw std::runtime_error(p.string() + ": unsupported schema_version " +
                             std::to_string(version));

  SystemSpec spec;
  spec.name = j.value("name", std::string("unnamed"));

  for (const auto& zj : j.at("zones")) {
    Zone z;
    z.id = zj.at("id").get<int>();
    z.name = zj.value("name", "zone" + std::to_string(z.id));
    z.allows_central_h2_production = zj.value("allows_central_h2_production", true);
    spec.zones.push_back(std::move(z));
  }

  for (const auto& rj : j.value("routes", json::array())) {
    Route r;
    r.from_zone = rj.at("from").get<int>();
    r.to_zone = rj.at("to").get<int>();
    r.distance_miles = rj.at("distance_miles").get<double>();
    r.existing_power_capacity_mw = rj.value("existing_power_capacity_mw", 0.0);
    r.power_expansion_allowed = rj.value("power_expansion_allowed", true);
    r.h2_transport_allowed = rj.value("h2_transport_allowed", true);
    spec.routes.push_back(r);
  }

  for (const auto& gj : j.value("gen_techs", json::array()))
    spec.gen_techs.push_back(parse_gen_tech(gj));

  for (const auto& sj : j.value("storage_techs", json::array())) {
    StorageTech s;
    s.id = sj.at("id").get<std::string>();
    s.carrier = parse_carrier(sj.at("carrier").get<std::string>());
    s.capex_power_or_flow = sj.at("capex_power_or_flow").get<double>();
    s.capex_energy = sj.at("capex_energy").get<double>();
    s.fom_per_year = sj.value("fom_per_yr", 0.0);
    s.round_trip_efficiency = sj.value("round_trip_efficiency", 1.0);
    s.charge_electricity = sj.value("charge_electricity_mwh_per_tonne", 0.0);
    s.lifetime_years = sj.at("lifetime_years").get<double>();
    s.boiloff_per_day = sj.value("boiloff_per_day", 0.0);
    spec.storage_techs.push_back(std::move(s));
  }

  for (const auto& tj : j.value("truck_types", json::array())) {
    TruckType t;
    t.id = tj.at("id").get<std::string>();
    t.carrier = parse_carrier(tj.at("carrier").get<std::string>());
    t.payload_tonne = tj.at("payload_tonne").get<double>();
    t.capex_per_truck = tj.at("capex_per_truck").get<double>();
    t.opex_per_mile = tj.value("opex_per_mile", 0.0);
    t.loading_station_capex = tj.value("loading_station_capex_per_tonne_hr", 0.0);
    t.loading_electricity = tj.value("loading_electricity_mwh_per_tonne", 0.0);
    t.avg_speed_mph = tj.value("avg_speed_mph", 35.0);
    t.boiloff_per_day = tj.value("boiloff_per_day", 0.0);
    t.lifetime_years = tj.at("lifetime_years").get<double>();
    spec.truck_types.push_back(std::move(t));
  }

  for (const auto& pj : j.value("pipeline_types", json::array())) {
    PipelineType t;
    t.id = pj.at("id").get<std::string>();
    t.flow_capacity_tonne_per_hour_per_unit =
        pj.at("flow_capacity_tonne_per_hour_per_unit").get<double>();
    t.capex_per_mile_per_unit = pj.at("capex_per_mile_per_unit").get<double>();
    t.compression_capex_per_mile = pj.value("compression_capex_per_mile", 0.0);
    t.compression_capex_fixed = pj.value("compression_capex_fixed", 0.0);
    t.compression_electricity_per_tonne_mile =
        pj.value("compression_electricity_mwh_per_tonne_mile", 0.0);
    t.compression_electricity_per_tonne =
        pj.value("compression_electricity_mwh_per_tonne", 0.0);
    t.lifetime_years = pj.at("lifetime_years").get<double>();
    t.linepack_fraction = pj.value("linepack_hours_of_throughput", 0.0);
    spec.pipeline_types.push_back(std::move(t));
  }

  if (j.contains("policy")) {
    const json& pj = j["policy"];
    spec.policy.co2_price = pj.value("co2_price_per_tonne", 0.0);
    spec.policy.co2_transport_cost = pj.value("co2_transport_cost_per_tonne", 0.0);
    spec.policy.gas_price = pj.value("gas_price_per_mmbtu", 0.0);
    spec.policy.discount_rate = pj.value("discount_rate", 0.07);
    spec.policy.voll_power = pj.value("voll_power_per_mwh", 20000.0);
    spec.policy.voll_h2 = pj.value("voll_h2_per_kg", 1000.0);
    spec.policy.coupling_enabled = pj.value("coupling_enabled", true);
  }
  if (j.contains("transmission")) {
    const json& tj = j["transmission"];
    spec.transmission.capex_per_mw_mile = tj.value("capex_per_mw_mile", 1600.0);
    spec.transmission.lifetime_years = tj.value("lifetime_years", 60.0);
    spec.transmission.loss_per_100_miles = tj.value("loss_per_100_miles", 0.01);
  }

  // hourly series
  const std::string demand_file = j.at("demand_file").get<std::string>();
  const CsvTable demand = read_csv((dir / demand_file).string());
  for (auto& z : spec.zones) {
    const std::string ptag = "power_z" + std::to_string(z.id);
    const std::string htag = "h2_z" + std::to_string(z.id);
    z.demand_power = demand.column(ptag);
    if (demand.has(htag))
      z.demand_h2 = demand.column(htag);
    else
      z.demand_h2.assign(z.demand_power.size(), 0.0);
  }

  if (j.contains("vre_bins")) {
    const std::string vre_file = j.at("vre_profile_file").get<std::string>();
    const CsvTable prof = read_csv((dir / vre_file).string());
    for (const auto& bj : j["vre_bins"]) {
      VreSupplyBin b;
      b.id = bj.at("id").get<std::string>();
      b.tech_id = bj.at("tech").get<std::string>();
      b.zone = bj.at("zone").get<int>();
      b.max_capacity_mw = bj.value("max_capacity_mw", kUnbounded);
      b.interconnection_cost_adder = bj.value("interconnection_adder_per_kw", 0.0);
      b.weekly_energy_budget = bj.value("weekly_energy_budget", false);
      b.profile = prof.column(b.id);
      spec.vre_bins.push_back(std::move(b));
    }
  }
  return spec;
}

RunConfig load_run_config(const std::string& path) {
  const json j = load_json(path);
  const int version = j.value("schema_version", 0);
  if (version != 1)
    throw std::runtime_error(path + ": unsupported schema_version " + std::to_string(version));

  RunConfig rc;
  const std::filesystem::path dir = std::filesystem::path(path).parent_path();
  if (j.contains("system"))
    rc.system_path = (dir / j.at("system").get<std::string>()).string();
  rc.output_dir = j.value("output_dir", std::string("out"));
  if (j.contains("scenarios")) {
    const json& s = j["scenarios"];
    rc.co2_prices = s.value("co2_prices", std::vector<double>{});
    rc.h2_demand_multipliers = s.value("h2_demand_multipliers", std::vector<double>{});
    rc.pipeline_capex_multipliers =
        s.value("pipeline_capex_multipliers", std::vector<double>{});
    rc.gas_prices = s.value("gas_prices", std::vector<double>{});
    if (s.contains("gen_capex"))
      for (const auto& [tech, vals] : s["gen_capex"].items())
        rc.gen_capex_axes[tech] = vals.get<std::vector<double>>();
  }
  if (j.contains("timeline")) {
    const json& t = j["timeline"];
    rc.timeline.hours_per_period = t.value("hours_per_period", 168);
    rc.timeline.n_periods = t.value("n_periods", 8);
    rc.timeline.include_extremes = t.value("include_extremes", true);
    rc.timeline.seed = t.value("seed", static_cast<uint64_t>(1));
    rc.timeline.kmeans_restarts = t.value("kmeans_restarts", 5);
    rc.timeline.kmeans_max_iter = t.value("kmeans_max_iter", 100);
  }
  if (j.contains("solver")) {
    const json& s = j["solver"];
    rc.solver.tol_feas = s.value("tol_feas", 1e-7);
    rc.solver.tol_dual = s.value("tol_dual", 1e-7);
    rc.solver.tol_pivot = s.value("tol_pivot", 1e-9);
    rc.solver.refactor_interval = s.value("refactor_interval", 64);
    rc.solver.max_iterations = s.value("max_iterations", 0);
    rc.solver.bland_window = s.value("bland_window", 500);
    rc.solver.scale = s.value("scale", true);
  }
  if (j.contains("formulation")) {
    const json& f = j["formulation"];
    const std::string link = f.value("storage_linkage", std::string("cyclic_week"));
    if (link == "cyclic_week")
      rc.formulation.storage_linkage = StorageLinkage::cyclic_week;
    else if (link == "linked_chronological")
      rc.formulation.storage_linkage = StorageLinkage::linked_chronological;
    else
      throw std::runtime_error("unknown storage_linkage: " + link);
    rc.formulation.pipeline_capex_multiplier = f.value("pipeline_capex_multiplier", 1.0);
    rc.formulation.h2_demand_multiplier = f.value("h2_demand_multiplier", 1.0);
    rc.formulation.power_demand_multiplier = f.value("power_demand_multiplier", 1.0);
  }
  return rc;
}

std::vector<ScenarioSpec> expand_scenarios(const RunConfig& rc) {
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return std::string(buf);
  };

  std::vector<ScenarioSpec> out;
  {
    ScenarioSpec base;
    base.formulation = rc.formulation;
    out.push_back(std::move(base));
  }
  auto sweep = [&](const std::vector<double>& axis, auto apply) {
    if (axis.empty()) return;
    std::vector<ScenarioSpec> next;
    next.reserve(out.size() * axis.size());
    for (const auto& sc : out)
      for (double v : axis) {
        ScenarioSpec s = sc;
        apply(s, v);
        next.push_back(std::move(s));
      }
    out = std::move(next);
  };

  auto tag = [&](ScenarioSpec& s, const std::string& t) {
    s.name += (s.name.empty() ? "" : "/") + t;
  };
  sweep(rc.co2_prices, [&](ScenarioSpec& s, double v) {
    s.co2_price = v;
    tag(s, "co2=" + fmt(v));
  });
  sweep(rc.gas_prices, [&](ScenarioSpec& s, double v) {
    s.gas_price = v;
    tag(s, "gas=" + fmt(v));
  });
  sweep(rc.h2_demand_multipliers, [&](ScenarioSpec& s, double v) {
    s.formulation.h2_demand_multiplier = v;
    tag(s, "h2x=" + fmt(v));
  });
  sweep(rc.pipeline_capex_multipliers, [&](ScenarioSpec& s, double v) {
    s.formulation.pipeline_capex_multiplier = v;
    tag(s, "pipex=" + fmt(v));
  });
  for (const auto& [tech, vals] : rc.gen_capex_axes)
    sweep(vals, [&](ScenarioSpec& s, double v) {
      s.gen_capex_override[tech] = v;
      tag(s, tech + "=" + fmt(v));
    });
  if (out.size() == 1 && out.front().name.empty()) out.front().name = "base";
  return out;
}

}  // namespace eh2
