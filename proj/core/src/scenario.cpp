#include "eh2/scenario.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "eh2/costs.hpp"
#include "eh2/units.hpp"
#include "json.hpp"

namespace eh2 {

bool same_coordinates(const ScenarioSpec& a, const ScenarioSpec& b) {
  return a.co2_price == b.co2_price && a.gas_price == b.gas_price &&
         a.coupling_enabled == b.coupling_enabled &&
         a.gen_capex_override == b.gen_capex_override &&
         a.formulation.storage_linkage == b.formulation.storage_linkage &&
         a.formulation.pipeline_capex_multiplier == b.formulation.pipeline_capex_multiplier &&
         a.formulation.h2_demand_multiplier == b.formulation.h2_demand_multiplier &&
         a.formulation.power_demand_multiplier == b.formulation.power_demand_multiplier;
}

SystemSpec apply_scenario(const SystemSpec& base, const ScenarioSpec& sc) {
  if (sc.formulation.pipeline_capex_multiplier < 0.0 ||
      sc.formulation.h2_demand_multiplier < 0.0 ||
      sc.formulation.power_demand_multiplier < 0.0)
    throw std::invalid_argument("scenario " + sc.name + ": negative multiplier");
  SystemSpec spec = base;
  if (sc.co2_price) spec.policy.co2_price = *sc.co2_price;
  if (sc.gas_price) spec.policy.gas_price = *sc.gas_price;
  if (sc.coupling_enabled) spec.policy.coupling_enabled = *sc.coupling_enabled;
  for (const auto& [id, capex] : sc.gen_capex_override) {
    bool found = false;
    for (auto& t : spec.gen_techs) {
      if (t.id == id) {
        // overrides are quoted in the tech's catalog basis
        t.capex_per_unit_power =
            t.capex_quoted_input_electric ? capex / t.efficiency_lhv : capex;
        found = true;
      }
    }
    if (!found)
      throw std::invalid_argument("scenario " + sc.name + ": no tech named " + id);
  }
  return spec;
}

namespace {

int travel_lag_hours(const TruckType& t, double miles) {
  return static_cast<int>(std::ceil(miles / t.avg_speed_mph));
}

}  // namespace

ScenarioResult run_scenario(const SystemSpec& base, const ReducedTimeline& tl,
                            const ScenarioSpec& sc, const SimplexOptions& sopt,
                            ScenarioArtifacts* artifacts) {
  ScenarioResult res;
  res.name = sc.name;

  const SystemSpec spec = apply_scenario(base, sc);
  LinearProgram lp = build_model(spec, tl, sc.formulation);

  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> start = warm_start_point(lp);
  SolveResult sol = solve_lp(lp, sopt, &start);
  res.solve_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.status = sol.status;
  res.iterations = sol.phase1_iterations + sol.phase2_iterations;
  res.message = sol.message;
  if (!sol.ok()) {
    if (artifacts) {
      artifacts->lp = std::move(lp);
      artifacts->sol = std::move(sol);
    }
    return res;
  }
  res.objective = sol.objective;

  for (int i = 0; i < lp.n_rows(); ++i) {
    const double act = lp.row_activity(i, sol.x);
    const double rhs = lp.rhs()[i];
    double viol = 0.0;
    switch (lp.senses()[i]) {
      case RowSense::le: viol = std::max(0.0, act - rhs); break;
      case RowSense::ge: viol = std::max(0.0, rhs - act); break;
      case RowSense::eq: viol = std::abs(act - rhs); break;
    }
    const double rel = viol / (1.0 + std::abs(rhs));
    res.max_row_violation_rel = std::max(res.max_row_violation_rel, rel);
    switch (lp.row_kind(i)) {
      case RowKind::power_balance:
      case RowKind::h2_balance:
        res.max_balance_violation_rel = std::max(res.max_balance_violation_rel, rel);
        break;
      case RowKind::truck_state_balance:
      case RowKind::truck_transit_balance:
      case RowKind::truck_conservation:
        res.max_truck_violation = std::max(res.max_truck_violation, viol);
        break;
      default:
        break;
    }
  }

  const auto& x = sol.x;
  const auto& obj = lp.objective();
  auto weight = [&](const Coord& c) { return tl.periods[c.week].weight; };
  auto add_cost = [&](const char* cat, int j) { res.cost_breakdown[cat] += obj[j] * x[j]; };

  double gen_cost = 0.0;  // vom + fuel + carbon + co2 transport, split up below

  // Degenerate vertices leave 1e-13..1e-11 residue on basic variables; keep
  // it out of the report so zero really reads as zero.
  constexpr double kReportDust = 1e-6;

  for (int j = 0; j < lp.n_cols(); ++j) {
    const Coord& c = lp.col_coord(j);
    const double v = x[j];
    if (std::abs(v) < kReportDust) continue;
    switch (lp.col_kind(j)) {
      case VarKind::gen_capacity:
        res.capacity_by_tech[spec.gen_techs[c.entity].id] += v;
        add_cost("investment_generation", j);
        break;
      case VarKind::vre_bin_capacity:
        res.capacity_by_tech[spec.vre_bins[c.entity].tech_id] += v;
        add_cost("investment_generation", j);
        break;
      case VarKind::storage_power:
        res.storage_power_by_tech[spec.storage_techs[c.entity].id] += v;
        add_cost("investment_storage", j);
        break;
      case VarKind::storage_energy:
        res.storage_energy_by_tech[spec.storage_techs[c.entity].id] += v;
        add_cost("investment_storage", j);
        break;
      case VarKind::gen_output: {
        const GenTech& t = spec.gen_techs[c.entity];
        const double annual = v * weight(c);
        if (t.sector == Sector::power) {
          res.power_output_by_tech[t.id] += annual;
          res.emissions_power_tonnes += annual * t.emissions_intensity;
        } else {
          res.h2_output_by_tech[t.id] += annual;
          res.emissions_h2_tonnes += annual * t.emissions_intensity;
        }
        res.captured_tonnes += annual * t.captured_intensity;
        if (t.coupling_role == CouplingRole::p2h)
          res.power_to_h2_mwh += annual * electricity_input_for_h2(t, 1.0);
        else if (t.coupling_role == CouplingRole::g2p)
          res.h2_to_power_mwh += annual;
        gen_cost += obj[j] * v;
        break;
      }
      case VarKind::vre_output: {
        const double annual = v * weight(c);
        res.power_output_by_tech[spec.vre_bins[c.entity].tech_id] += annual;
        res.vre_output_mwh += annual;
        break;
      }
      case VarKind::charge: {
        const StorageTech& s = spec.storage_techs[c.entity];
        const double annual = v * weight(c);
        if (s.carrier == Carrier::electricity) {
          res.storage_charge_mwh += annual;
        } else {
          res.storage_charge_h2_tonnes += annual;
          res.h2_conditioning_mwh += annual * s.charge_electricity;
        }
        break;
      }
      case VarKind::discharge: {
        const StorageTech& s = spec.storage_techs[c.entity];
        const double annual = v * weight(c);
        if (s.carrier == Carrier::electricity)
          res.storage_discharge_mwh += annual;
        else
          res.storage_discharge_h2_tonnes += annual;
        break;
      }
      case VarKind::inventory: {
        const StorageTech& s = spec.storage_techs[c.entity];
        if (s.boiloff_per_day > 0.0)
          res.h2_boiloff_tonnes += v * weight(c) * s.boiloff_per_day / 24.0;
        break;
      }
      case VarKind::line_flow: {
        const Route& r = spec.routes[c.route];
        res.transmission_loss_mwh +=
            v * weight(c) * spec.transmission.loss_per_100_miles * r.distance_miles / 100.0;
        break;
      }
      case VarKind::truck_count:
        res.truck_fleet_by_type[spec.truck_types[c.entity].id] += v;
        add_cost("investment_truck", j);
        break;
      case VarKind::truck_station_capacity:
        add_cost("investment_truck", j);
        break;
      case VarKind::truck_load: {
        const TruckType& t = spec.truck_types[c.entity];
        res.h2_conditioning_mwh += v * weight(c) * t.payload_tonne * t.loading_electricity;
        break;
      }
      case VarKind::truck_departure: {
        const TruckType& t = spec.truck_types[c.entity];
        if (c.state == 0) {
          res.h2_moved_by_truck_tonnes += v * weight(c) * t.payload_tonne;
          if (t.boiloff_per_day > 0.0) {
            const int lag = travel_lag_hours(t, spec.routes[c.route].distance_miles);
            res.h2_boiloff_tonnes +=
                v * weight(c) * t.payload_tonne * t.boiloff_per_day * lag / 24.0;
          }
        }
        add_cost("truck_mileage", j);
        break;
      }
      case VarKind::pipeline_flow: {
        const PipelineType& t = spec.pipeline_types[c.entity];
        const double annual = v * weight(c);
        if (c.state == 1) res.h2_moved_by_pipeline_tonnes += annual;
        if (c.state == 0) {
          const Route& r = spec.routes[c.route];
          res.h2_conditioning_mwh +=
              annual * (t.compression_electricity_per_tonne +
                        t.compression_electricity_per_tonne_mile * r.distance_miles);
        }
        break;
      }
      case VarKind::pipeline_units:
        res.pipeline_units += v;
        add_cost("investment_pipeline", j);
        break;
      case VarKind::line_capacity_add:
        res.line_expansion_mw += v;
        add_cost("investment_transmission", j);
        break;
      case VarKind::nse_power:
        res.nse_power_mwh += v * weight(c);
        add_cost("unserved_penalty", j);
        break;
      case VarKind::nse_h2:
        res.nse_h2_tonnes += v * weight(c);
        add_cost("unserved_penalty", j);
        break;
      default:
        break;
    }
  }

  res.emissions_tonnes = res.emissions_power_tonnes + res.emissions_h2_tonnes;

  const double carbon_cost = res.emissions_tonnes * spec.policy.co2_price;
  const double transport_cost = res.captured_tonnes * spec.policy.co2_transport_cost;
  if (gen_cost != 0.0)
    res.cost_breakdown["generation_variable_cost"] = gen_cost - carbon_cost - transport_cost;
  if (carbon_cost != 0.0) res.cost_breakdown["carbon_price"] = carbon_cost;
  if (transport_cost != 0.0) res.cost_breakdown["co2_transport"] = transport_cost;

  // VRE energy available from the built bin capacities, for curtailment
  std::vector<double> bin_cap(spec.vre_bins.size(), 0.0);
  for (int j = 0; j < lp.n_cols(); ++j)
    if (lp.col_kind(j) == VarKind::vre_bin_capacity && std::abs(x[j]) >= kReportDust)
      bin_cap[lp.col_coord(j).entity] += x[j];
  const int H = tl.hours_per_period;
  for (std::size_t b = 0; b < spec.vre_bins.size(); ++b) {
    if (bin_cap[b] == 0.0) continue;
    const auto& prof = spec.vre_bins[b].profile;
    for (const auto& p : tl.periods) {
      double cf_sum = 0.0;
      for (int h = 0; h < H; ++h) cf_sum += prof[p.source_start_hour + h];
      res.vre_available_mwh += bin_cap[b] * cf_sum * p.weight;
    }
  }
  if (res.vre_available_mwh > 0.0)
    res.vre_curtailment = 1.0 - res.vre_output_mwh / res.vre_available_mwh;

  // annual demand actually placed on the model
  for (const auto& z : spec.zones) {
    for (const auto& p : tl.periods) {
      for (int h = 0; h < H; ++h) {
        res.power_demand_mwh += z.demand_power[p.source_start_hour + h] * p.weight *
                                sc.formulation.power_demand_multiplier;
        res.h2_demand_tonnes += z.demand_h2[p.source_start_hour + h] * p.weight *
                                sc.formulation.h2_demand_multiplier;
      }
    }
  }

  // marginal price summaries; hourly price = row dual / period weight
  for (int i = 0; i < lp.n_rows(); ++i) {
    const RowKind k = lp.row_kind(i);
    if (k != RowKind::power_balance && k != RowKind::h2_balance) continue;
    const Coord& c = lp.row_coord(i);
    const std::string& zn = spec.zones[c.zone].name;
    if (k == RowKind::power_balance)
      res.mean_power_price_by_zone[zn] += sol.row_duals[i] / kHoursPerYear;
    else
      res.mean_h2_price_by_zone[zn] += sol.row_duals[i] / kHoursPerYear;
  }

  if (artifacts) {
    artifacts->lp = std::move(lp);
    artifacts->sol = std::move(sol);
  }
  return res;
}

std::vector<ScenarioResult> run_grid(const SystemSpec& base, const ReducedTimeline& tl,
                                     const std::vector<ScenarioSpec>& grid, int jobs,
                                     const SimplexOptions& sopt) {
  std::vector<const ScenarioSpec*> unique;
  for (const auto& sc : grid) {
    bool dup = false;
    for (const auto* u : unique)
      if (same_coordinates(*u, sc)) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(&sc);
  }

  std::vector<ScenarioResult> out(unique.size());
  if (unique.empty()) return out;
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(unique.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < unique.size(); ++i)
      out[i] = run_scenario(base, tl, *unique[i], sopt);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= unique.size()) return;
        out[i] = run_scenario(base, tl, *unique[i], sopt);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

CoupledComparison coupled_vs_decoupled(const SystemSpec& base, const ReducedTimeline& tl,
                                       const ScenarioSpec& sc, const SimplexOptions& sopt) {
  CoupledComparison cmp;
  ScenarioSpec on = sc;
  on.name = sc.name.empty() ? "coupled" : sc.name + "/coupled";
  on.coupling_enabled = true;
  ScenarioSpec off = sc;
  off.name = sc.name.empty() ? "decoupled" : sc.name + "/decoupled";
  off.coupling_enabled = false;
  cmp.coupled = run_scenario(base, tl, on, sopt);
  cmp.decoupled = run_scenario(base, tl, off, sopt);
  return cmp;
}

const char* to_string(CouplingRegime r) {
  switch (r) {
    case CouplingRegime::inactive: return "inactive";
    case CouplingRegime::generator: return "generator";
    case CouplingRegime::storage: return "storage";
    case CouplingRegime::flexible_demand: return "flexible_demand";
  }
  return "?";
}

CouplingRegime classify_regime(double power_to_h2_mwh, double h2_to_power_mwh,
                               double order_of_magnitude, double zero_tol) {
  const bool p2h = power_to_h2_mwh > zero_tol;
  const bool g2p = h2_to_power_mwh > zero_tol;
  if (!p2h && !g2p) return CouplingRegime::inactive;
  if (!g2p) return CouplingRegime::flexible_demand;
  if (!p2h) return CouplingRegime::generator;
  const double r = power_to_h2_mwh / h2_to_power_mwh;
  if (r > order_of_magnitude) return CouplingRegime::flexible_demand;
  if (r < 1.0 / order_of_magnitude) return CouplingRegime::generator;
  return CouplingRegime::storage;
}

double abatement_cost(const GenTech& dirty, const GenTech& clean, const Policy& policy,
                      double utilization) {
  const double demis = dirty.emissions_intensity - clean.emissions_intensity;
  if (demis <= 0.0)
    throw std::invalid_argument("abatement_cost: clean tech does not reduce emissions");
  const double dc = levelized_cost_at_utilization(clean, policy, utilization) -
                    levelized_cost_at_utilization(dirty, policy, utilization);
  return dc / demis;
}

std::string result_to_json(const ScenarioResult& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["status"] = to_string(r.status);
  j["objective_usd_per_yr"] = r.objective;
  j["power_to_h2_mwh"] = r.power_to_h2_mwh;
  j["h2_to_power_mwh"] = r.h2_to_power_mwh;
  j["coupling_regime"] = to_string(classify_regime(r.power_to_h2_mwh, r.h2_to_power_mwh));
  j["capacity_by_tech"] = r.capacity_by_tech;
  j["power_output_by_tech_mwh"] = r.power_output_by_tech;
  j["h2_output_by_tech_tonnes"] = r.h2_output_by_tech;
  j["storage_power_by_tech"] = r.storage_power_by_tech;
  j["storage_energy_by_tech"] = r.storage_energy_by_tech;
  j["truck_fleet_by_type"] = r.truck_fleet_by_type;
  j["pipeline_units"] = r.pipeline_units;
  j["line_expansion_mw"] = r.line_expansion_mw;
  j["h2_moved_by_pipeline_tonnes"] = r.h2_moved_by_pipeline_tonnes;
  j["h2_moved_by_truck_tonnes"] = r.h2_moved_by_truck_tonnes;
  j["cost_breakdown_usd_per_yr"] = r.cost_breakdown;
  j["power_demand_mwh"] = r.power_demand_mwh;
  j["h2_demand_tonnes"] = r.h2_demand_tonnes;
  j["storage_charge_mwh"] = r.storage_charge_mwh;
  j["storage_discharge_mwh"] = r.storage_discharge_mwh;
  j["storage_charge_h2_tonnes"] = r.storage_charge_h2_tonnes;
  j["storage_discharge_h2_tonnes"] = r.storage_discharge_h2_tonnes;
  j["transmission_loss_mwh"] = r.transmission_loss_mwh;
  j["h2_conditioning_mwh"] = r.h2_conditioning_mwh;
  j["h2_boiloff_tonnes"] = r.h2_boiloff_tonnes;
  j["vre_available_mwh"] = r.vre_available_mwh;
  j["vre_output_mwh"] = r.vre_output_mwh;
  j["vre_curtailment"] = r.vre_curtailment;
  j["nse_power_mwh"] = r.nse_power_mwh;
  j["nse_h2_tonnes"] = r.nse_h2_tonnes;
  j["emissions_tonnes"] = r.emissions_tonnes;
  j["emissions_power_tonnes"] = r.emissions_power_tonnes;
  j["emissions_h2_tonnes"] = r.emissions_h2_tonnes;
  j["captured_tonnes"] = r.captured_tonnes;
  j["mean_power_price_by_zone"] = r.mean_power_price_by_zone;
  j["mean_h2_price_by_zone"] = r.mean_h2_price_by_zone;
  j["iterations"] = r.iterations;
  if (!r.message.empty()) j["message"] = r.message;
  return j.dump(2);
}

std::string results_to_csv(const std::vector<ScenarioResult>& rs) {
  std::ostringstream os;
  os << "# eh2csv v1\n";
  os << "scenario,metric,key,value\n";
  auto row = [&](const std::string& n, const std::string& m, const std::string& k, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << n << "," << m << "," << k << "," << buf << "\n";
  };
  for (const auto& r : rs) {
    os << r.name << ",status," << to_string(r.status) << ",\n";
    row(r.name, "objective_usd_per_yr", "", r.objective);
    row(r.name, "power_to_h2_mwh", "", r.power_to_h2_mwh);
    row(r.name, "h2_to_power_mwh", "", r.h2_to_power_mwh);
    os << r.name << ",coupling_regime,"
       << to_string(classify_regime(r.power_to_h2_mwh, r.h2_to_power_mwh)) << ",\n";
    for (const auto& [k, v] : r.capacity_by_tech) row(r.name, "capacity", k, v);
    for (const auto& [k, v] : r.power_output_by_tech) row(r.name, "power_output_mwh", k, v);
    for (const auto& [k, v] : r.h2_output_by_tech) row(r.name, "h2_output_tonnes", k, v);
    for (const auto& [k, v] : r.storage_power_by_tech) row(r.name, "storage_power", k, v);
    for (const auto& [k, v] : r.storage_energy_by_tech) row(r.name, "storage_energy", k, v);
    for (const auto& [k, v] : r.truck_fleet_by_type) row(r.name, "truck_fleet", k, v);
    for (const auto& [k, v] : r.cost_breakdown) row(r.name, "cost_usd_per_yr", k, v);
    for (const auto& [k, v] : r.mean_power_price_by_zone)
      row(r.name, "mean_power_price_usd_per_mwh", k, v);
    for (const auto& [k, v] : r.mean_h2_price_by_zone)
      row(r.name, "mean_h2_price_usd_per_tonne", k, v);
    row(r.name, "pipeline_units", "", r.pipeline_units);
    row(r.name, "line_expansion_mw", "", r.line_expansion_mw);
    row(r.name, "h2_moved_by_pipeline_tonnes", "", r.h2_moved_by_pipeline_tonnes);
    row(r.name, "h2_moved_by_truck_tonnes", "", r.h2_moved_by_truck_tonnes);
    row(r.name, "power_demand_mwh", "", r.power_demand_mwh);
    row(r.name, "h2_demand_tonnes", "", r.h2_demand_tonnes);
    row(r.name, "vre_curtailment", "", r.vre_curtailment);
    row(r.name, "nse_power_mwh", "", r.nse_power_mwh);
    row(r.name, "nse_h2_tonnes", "", r.nse_h2_tonnes);
    row(r.name, "emissions_tonnes", "", r.emissions_tonnes);
    row(r.name, "emissions_power_tonnes", "", r.emissions_power_tonnes);
    row(r.name, "emissions_h2_tonnes", "", r.emissions_h2_tonnes);
    row(r.name, "captured_tonnes", "", r.captured_tonnes);
  }
  return os.str();
}

}  // namespace eh2
