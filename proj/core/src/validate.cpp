#include "eh2/validate.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace eh2 {

namespace {

class Checker {
 public:
  explicit Checker(const SystemSpec& spec) : spec_(spec) {}

  std::vector<Violation> run() {
    check_zones();
    check_routes();
    check_gen_techs();
    check_vre_bins();
    check_storage();
    check_trucks();
    check_pipelines();
    check_policy();
    std::sort(out_.begin(), out_.end(), [](const Violation& a, const Violation& b) {
      return std::tie(a.code, a.message) < std::tie(b.code, b.message);
    });
    return std::move(out_);
  }

 private:
  template <typename... Args>
  void add(const std::string& code, Args&&... parts) {
    std::ostringstream msg;
    (msg << ... << parts);
    out_.push_back({code, msg.str()});
  }

  static bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0.0; }

  void check_zones() {
    if (spec_.zones.empty()) {
      add("zones.empty", "at least one zone is required");
      return;
    }
    std::set<int> ids;
    const std::size_t n_hours = spec_.zones.front().demand_power.size();
    for (const Zone& z : spec_.zones) {
      if (!ids.insert(z.id).second) add("zone.id.duplicate", "zone id ", z.id, " appears twice");
      if (z.demand_power.size() != n_hours || z.demand_h2.size() != n_hours)
        add("zone.demand.length", "zone ", z.id, " demand series length differs (power ",
            z.demand_power.size(), ", h2 ", z.demand_h2.size(), ", expected ", n_hours, ")");
      check_series_nonneg(z.demand_power, z.id, "demand_power");
      check_series_nonneg(z.demand_h2, z.id, "demand_h2");
    }
    for (int want = 1; want <= static_cast<int>(spec_.zones.size()); ++want) {
      if (!ids.count(want)) {
        add("zone.id.gap", "zone ids must be contiguous from 1; missing id ", want);
        break;
      }
    }
    if (n_hours == 0) add("zone.demand.empty", "demand series are empty");
  }

  void check_series_nonneg(const HourlySeries& s, int zone_id, const char* name) {
    for (std::size_t h = 0; h < s.size(); ++h) {
      if (!std::isfinite(s[h]) || s[h] < 0.0) {
        add("zone.demand.negative", "zone ", zone_id, " ", name, " at hour ", h,
            " is negative or non-finite (", s[h], ")");
        return;  // one violation per series keeps the report readable
      }
    }
  }

  void check_routes() {
    std::unordered_map<long long, double> seen;  // key (min,max) -> distance
    for (const Route& r : spec_.routes) {
      if (!spec_.find_zone(r.from_zone) || !spec_.find_zone(r.to_zone)) {
        add("route.zone.unknown", "route ", r.from_zone, "-", r.to_zone,
            " references an unknown zone");
        continue;
      }
      if (r.from_zone == r.to_zone)
        add("route.self_loop", "route ", r.from_zone, "-", r.to_zone, " connects a zone to itself");
      else if (r.distance_miles <= 0.0)
        add("route.distance.nonpositive", "route ", r.from_zone, "-", r.to_zone,
            " has non-positive distance ", r.distance_miles);
      if (!finite_nonneg(r.existing_power_capacity_mw))
        add("route.capacity.negative", "route ", r.from_zone, "-", r.to_zone,
            " has negative existing capacity");
      const long long key = std::minmax(r.from_zone, r.to_zone).first * 100000LL +
                            std::minmax(r.from_zone, r.to_zone).second;
      auto [it, inserted] = seen.emplace(key, r.distance_miles);
      if (!inserted) {
        if (std::abs(it->second - r.distance_miles) > 1e-9)
          add("route.distance.asymmetric", "routes between zones ", r.from_zone, " and ",
              r.to_zone, " disagree on distance");
        else
          add("route.duplicate", "route between zones ", r.from_zone, " and ", r.to_zone,
              " is listed twice");
      }
    }
  }

  void check_gen_techs() {
    std::unordered_set<std::string> ids;
    for (const GenTech& t : spec_.gen_techs) {
      if (!ids.insert(t.id).second) add("gen.id.duplicate", "gen tech '", t.id, "' appears twice");
      if (t.lifetime_years <= 0.0)
        add("gen.lifetime.nonpositive", "gen tech '", t.id, "' lifetime must be positive");
      if (t.sector == Sector::power && t.fuel != Fuel::none && t.fuel != Fuel::hydrogen &&
          t.heat_rate_mmbtu_per_mwh <= 0.0)
        add("gen.heat_rate.nonpositive", "fuel-burning power tech '", t.id,
            "' needs a positive heat rate");
      if (t.efficiency_lhv != 0.0 && (t.efficiency_lhv <= 0.0 || t.efficiency_lhv > 1.0))
        add("gen.efficiency.range", "gen tech '", t.id, "' efficiency_lhv must be in (0,1]");
      if (t.sector == Sector::hydrogen && t.efficiency_lhv == 0.0 &&
          (t.fuel != Fuel::none || t.coupling_role == CouplingRole::p2h))
        add("gen.efficiency.missing", "H2 tech '", t.id, "' needs efficiency_lhv");
      if (t.coupling_role == CouplingRole::g2p && t.efficiency_lhv == 0.0)
        add("gen.efficiency.missing", "G2P tech '", t.id, "' needs efficiency_lhv");
      if (t.is_vre) {
        if (t.emissions_intensity != 0.0)
          add("gen.vre.emitting", "VRE tech '", t.id, "' must have zero emissions intensity");
        if (t.fuel != Fuel::none || t.heat_rate_mmbtu_per_mwh != 0.0)
          add("gen.vre.fuel", "VRE tech '", t.id, "' must not have fuel parameters");
      }
      if (t.uc_modelled) {
        if (t.unit_size <= 0.0)
          add("gen.uc.unit_size", "UC tech '", t.id, "' needs unit_size > 0");
        if (t.min_stable_fraction < 0.0 || t.min_stable_fraction > 1.0)
          add("gen.uc.min_stable", "UC tech '", t.id, "' min_stable_fraction must be in [0,1]");
        if (t.ramp_fraction_per_hour < 0.0 || t.ramp_fraction_per_hour > 1.0)
          add("gen.uc.ramp", "UC tech '", t.id, "' ramp_fraction_per_hour must be in [0,1]");
      }
      if (!finite_nonneg(t.capex_per_unit_power) || !finite_nonneg(t.fom_per_year) ||
          !finite_nonneg(t.vom) || !finite_nonneg(t.emissions_intensity) ||
          !finite_nonneg(t.captured_intensity))
        add("gen.param.negative", "gen tech '", t.id, "' has a negative cost or emission value");
      if (t.coupling_role == CouplingRole::p2h && t.sector != Sector::hydrogen)
        add("gen.coupling.sector", "p2h tech '", t.id, "' must be in the hydrogen sector");
      if (t.coupling_role == CouplingRole::g2p && t.sector != Sector::power)
        add("gen.coupling.sector", "g2p tech '", t.id, "' must be in the power sector");
    }
  }

  void check_vre_bins() {
    std::unordered_set<std::string> ids;
    const std::size_t n_hours = spec_.n_hours();
    for (const VreSupplyBin& b : spec_.vre_bins) {
      if (!ids.insert(b.id).second) add("vre.id.duplicate", "VRE bin '", b.id, "' appears twice");
      const GenTech* tech = spec_.find_gen_tech(b.tech_id);
      if (!tech) {
        add("vre.tech.unknown", "VRE bin '", b.id, "' references unknown tech '", b.tech_id, "'");
      } else if (!tech->is_vre) {
        add("vre.tech.not_vre", "VRE bin '", b.id, "' references non-VRE tech '", b.tech_id, "'");
      }
      if (!spec_.find_zone(b.zone))
        add("vre.zone.unknown", "VRE bin '", b.id, "' references unknown zone ", b.zone);
      if (!is_unbounded(b.max_capacity_mw) && b.max_capacity_mw < 0.0)
        add("vre.max_capacity.negative", "VRE bin '", b.id, "' has negative max capacity");
      if (b.profile.size() != n_hours)
        add("vre.profile.length", "VRE bin '", b.id, "' profile length ", b.profile.size(),
            " differs from demand length ", n_hours);
      for (std::size_t h = 0; h < b.profile.size(); ++h) {
        if (!std::isfinite(b.profile[h]) || b.profile[h] < 0.0 || b.profile[h] > 1.0) {
          add("vre.profile.range", "VRE bin '", b.id, "' profile at hour ", h,
              " is outside [0,1] (", b.profile[h], ")");
          break;
        }
      }
    }
  }

  void check_storage() {
    std::unordered_set<std::string> ids;
    for (const StorageTech& s : spec_.storage_techs) {
      if (!ids.insert(s.id).second)
        add("storage.id.duplicate", "storage tech '", s.id, "' appears twice");
      if (s.round_trip_efficiency <= 0.0 || s.round_trip_efficiency > 1.0)
        add("storage.rte.range", "storage '", s.id, "' round_trip_efficiency must be in (0,1]");
      if (s.boiloff_per_day < 0.0)
        add("storage.boiloff.negative", "storage '", s.id, "' has negative boiloff");
      if (s.boiloff_per_day > 0.0 && s.carrier != Carrier::hydrogen_liquid)
        add("storage.boiloff.carrier", "storage '", s.id,
            "': boiloff only applies to the liquid carrier");
      if (s.lifetime_years <= 0.0)
        add("storage.lifetime.nonpositive", "storage '", s.id, "' lifetime must be positive");
      if (!finite_nonneg(s.capex_power_or_flow) || !finite_nonneg(s.capex_energy) ||
          !finite_nonneg(s.charge_electricity))
        add("storage.param.negative", "storage '", s.id, "' has a negative cost value");
    }
  }

  void check_trucks() {
    std::unordered_set<std::string> ids;
    for (const TruckType& t : spec_.truck_types) {
      if (!ids.insert(t.id).second) add("truck.id.duplicate", "truck '", t.id, "' appears twice");
      if (t.carrier == Carrier::electricity)
        add("truck.carrier.invalid", "truck '", t.id, "' must carry hydrogen");
      if (t.payload_tonne <= 0.0)
        add("truck.payload.nonpositive", "truck '", t.id, "' payload must be positive");
      if (t.avg_speed_mph <= 0.0)
        add("truck.speed.nonpositive", "truck '", t.id, "' average speed must be positive");
      if (t.boiloff_per_day > 0.0 && t.carrier != Carrier::hydrogen_liquid)
        add("truck.boiloff.gaseous", "truck '", t.id,
            "': boiloff only applies to the liquid carrier");
      if (t.lifetime_years <= 0.0)
        add("truck.lifetime.nonpositive", "truck '", t.id, "' lifetime must be positive");
      if (!finite_nonneg(t.capex_per_truck) || !finite_nonneg(t.opex_per_mile) ||
          !finite_nonneg(t.loading_station_capex) || !finite_nonneg(t.loading_electricity) ||
          t.boiloff_per_day < 0.0)
        add("truck.param.negative", "truck '", t.id, "' has a negative cost value");
    }
  }

  void check_pipelines() {
    std::unordered_set<std::string> ids;
    for (const PipelineType& p : spec_.pipeline_types) {
      if (!ids.insert(p.id).second)
        add("pipeline.id.duplicate", "pipeline '", p.id, "' appears twice");
      if (p.flow_capacity_tonne_per_hour_per_unit <= 0.0)
        add("pipeline.capacity.nonpositive", "pipeline '", p.id,
            "' unit flow capacity must be positive");
      if (p.lifetime_years <= 0.0)
        add("pipeline.lifetime.nonpositive", "pipeline '", p.id, "' lifetime must be positive");
      if (!finite_nonneg(p.capex_per_mile_per_unit) || !finite_nonneg(p.compression_capex_per_mile) ||
          !finite_nonneg(p.compression_capex_fixed) ||
          !finite_nonneg(p.compression_electricity_per_tonne_mile) ||
          !finite_nonneg(p.compression_electricity_per_tonne) || p.linepack_fraction < 0.0)
        add("pipeline.param.negative", "pipeline '", p.id,
            "' has a negative cost or energy coefficient");
    }
  }

  void check_policy() {
    const Policy& p = spec_.policy;
    if (p.discount_rate <= 0.0)
      add("policy.discount.nonpositive", "discount rate must be positive");
    if (p.co2_price < 0.0 || p.co2_transport_cost < 0.0 || p.gas_price < 0.0 ||
        p.voll_power < 0.0 || p.voll_h2 < 0.0)
      add("policy.price.negative", "policy prices must be non-negative");
  }

  const SystemSpec& spec_;
  std::vector<Violation> out_;
};

}  // namespace

std::vector<Violation> validate_spec(const SystemSpec& spec) { return Checker(spec).run(); }

std::string format_violations(const std::vector<Violation>& violations) {
  std::ostringstream os;
  for (const Violation& v : violations) os << v.code << ": " << v.message << "\n";
  return os.str();
}

}  // namespace eh2
