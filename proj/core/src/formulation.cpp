#include "eh2/formulation.hpp"

#include <cmath>
#include <stdexcept>

#include "eh2/costs.hpp"
#include "eh2/units.hpp"

namespace eh2 {

namespace {

// kW per unit of installed capacity: 1 MW for power techs, 1 tonne/h of H2
// output for hydrogen techs
double kw_per_capacity_unit(Sector s) {
  return s == Sector::power ? kKwPerMw : kLhvH2MwhPerTonne * kKwPerMw;
}

int16_t i16(int v) { return static_cast<int16_t>(v); }
int8_t i8(int v) { return static_cast<int8_t>(v); }

}  // namespace

LinearProgram build_model(const SystemSpec& spec, const ReducedTimeline& tl,
                          const FormulationOptions& opt) {
  const int Z = spec.n_zones();
  const int P = tl.n_periods();
  const int H = tl.hours_per_period;
  const int G = static_cast<int>(spec.gen_techs.size());
  const int B = static_cast<int>(spec.vre_bins.size());
  const int S = static_cast<int>(spec.storage_techs.size());
  const int R = static_cast<int>(spec.routes.size());
  const int TT = static_cast<int>(spec.truck_types.size());
  const int PT = static_cast<int>(spec.pipeline_types.size());

  if (P == 0) throw std::invalid_argument("build_model: timeline has no periods");
  for (const auto& per : tl.periods) {
    if (per.source_start_hour < 0 ||
        per.source_start_hour + H > static_cast<int>(spec.n_hours()))
      throw std::invalid_argument("build_model: period exceeds the hourly input range");
  }

  const Policy& pol = spec.policy;
  const double rate = pol.discount_rate;

  LinearProgram lp;

  auto src = [&](int p, int h) { return tl.periods[p].source_start_hour + h; };
  auto wgt = [&](int p) { return tl.periods[p].weight; };
  auto prev_h = [&](int h) { return (h + H - 1) % H; };
  // lagged hour within the (cyclic) period
  auto lag_h = [&](int h, int lag) { return ((h - lag) % H + H) % H; };

  auto pcoord = [&](int entity, int zone, int p, int h) {
    Coord c;
    c.entity = i16(entity);
    c.zone = i16(zone);
    c.week = i16(p);
    c.hour = i16(h);
    return c;
  };
  auto rcoord = [&](int entity, int route, int dir, int state, int p, int h) {
    Coord c;
    c.entity = i16(entity);
    c.route = i16(route);
    c.dir = i8(dir);
    c.state = i8(state);
    c.week = i16(p);
    c.hour = i16(h);
    return c;
  };
  auto zscoord = [&](int entity, int zone, int state, int p, int h) {
    Coord c;
    c.entity = i16(entity);
    c.zone = i16(zone);
    c.state = i8(state);
    c.week = i16(p);
    c.hour = i16(h);
    return c;
  };

  // ---- investment columns ----

  // generators (non-VRE); -1 where a tech cannot be built in a zone
  std::vector<int> gen_cap(static_cast<std::size_t>(G) * Z, -1);
  std::vector<char> gen_active(G, 0);
  for (int g = 0; g < G; ++g) {
    const GenTech& t = spec.gen_techs[g];
    if (t.is_vre) continue;
    if (!pol.coupling_enabled && t.coupling_role != CouplingRole::none) continue;
    gen_active[g] = 1;
    const double kw = kw_per_capacity_unit(t.sector);
    const double inv = (annuitize(t.capex_per_unit_power, t.lifetime_years, rate) +
                        t.fom_per_year) * kw;
    for (int z = 0; z < Z; ++z) {
      if (t.requires_central_site && !spec.zones[z].allows_central_h2_production) continue;
      Coord c;
      c.entity = i16(g);
      c.zone = i16(z);
      gen_cap[g * Z + z] = lp.add_column(VarKind::gen_capacity, c, 0.0, kUnbounded, inv);
    }
  }

  // VRE supply bins
  std::vector<int> bin_cap(B, -1);
  for (int b = 0; b < B; ++b) {
    const VreSupplyBin& bin = spec.vre_bins[b];
    const GenTech* t = spec.find_gen_tech(bin.tech_id);
    if (t == nullptr || !t->is_vre)
      throw std::invalid_argument("build_model: VRE bin references unknown tech " + bin.tech_id);
    const double inv =
        (annuitize(t->capex_per_unit_power + bin.interconnection_cost_adder, t->lifetime_years,
                   rate) +
         t->fom_per_year) * kKwPerMw;
    Coord c;
    c.entity = i16(b);
    c.zone = i16(bin.zone - 1);
    bin_cap[b] = lp.add_column(VarKind::vre_bin_capacity, c, 0.0, bin.max_capacity_mw, inv);
  }

  // storage power/flow and energy capacity
  std::vector<int> sto_pow(static_cast<std::size_t>(S) * Z, -1);
  std::vector<int> sto_en(static_cast<std::size_t>(S) * Z, -1);
  for (int s = 0; s < S; ++s) {
    const StorageTech& st = spec.storage_techs[s];
    const double unit = st.carrier == Carrier::electricity ? kKwPerMw : 1.0;
    const double inv_p =
        (annuitize(st.capex_power_or_flow, st.lifetime_years, rate) + st.fom_per_year) * unit;
    const double inv_e = annuitize(st.capex_energy, st.lifetime_years, rate) * unit;
    for (int z = 0; z < Z; ++z) {
      Coord c;
      c.entity = i16(s);
      c.zone = i16(z);
      sto_pow[s * Z + z] = lp.add_column(VarKind::storage_power, c, 0.0, kUnbounded, inv_p);
      sto_en[s * Z + z] = lp.add_column(VarKind::storage_energy, c, 0.0, kUnbounded, inv_e);
    }
  }

  // transmission expansion
  std::vector<int> line_add(R, -1);
  for (int r = 0; r < R; ++r) {
    const Route& rt = spec.routes[r];
    if (!rt.power_expansion_allowed) continue;
    const double inv = annuitize(spec.transmission.capex_per_mw_mile * rt.distance_miles,
                                 spec.transmission.lifetime_years, rate);
    Coord c;
    c.route = i16(r);
    line_add[r] = lp.add_column(VarKind::line_capacity_add, c, 0.0, kUnbounded, inv);
  }

  // pipelines
  std::vector<int> pipe_units(static_cast<std::size_t>(PT) * R, -1);
  for (int q = 0; q < PT; ++q) {
    const PipelineType& pt = spec.pipeline_types[q];
    for (int r = 0; r < R; ++r) {
      const Route& rt = spec.routes[r];
      if (!rt.h2_transport_allowed || rt.distance_miles <= 0.0) continue;
      const double capex = opt.pipeline_capex_multiplier *
                           ((pt.capex_per_mile_per_unit + pt.compression_capex_per_mile) *
                                rt.distance_miles +
                            pt.compression_capex_fixed);
      Coord c;
      c.entity = i16(q);
      c.route = i16(r);
      pipe_units[q * R + r] =
          lp.add_column(VarKind::pipeline_units, c, 0.0, kUnbounded,
                        annuitize(capex, pt.lifetime_years, rate));
    }
  }

  // trucks: fleet plus per-zone station throughput. travel time is rounded
  // up to whole hours; routes longer than the period are unusable
  std::vector<std::vector<int>> truck_routes(TT);
  std::vector<std::vector<int>> truck_lag(TT);
  std::vector<int> truck_count(TT, -1);
  std::vector<int> station_cap(static_cast<std::size_t>(TT) * Z, -1);
  for (int tt = 0; tt < TT; ++tt) {
    const TruckType& tr = spec.truck_types[tt];
    for (int r = 0; r < R; ++r) {
      const Route& rt = spec.routes[r];
      if (!rt.h2_transport_allowed || rt.distance_miles <= 0.0) continue;
      const int lag = static_cast<int>(std::ceil(rt.distance_miles / tr.avg_speed_mph));
      if (lag >= H) continue;
      truck_routes[tt].push_back(r);
      truck_lag[tt].push_back(lag);
    }
    if (truck_routes[tt].empty()) continue;
    Coord c;
    c.entity = i16(tt);
    truck_count[tt] = lp.add_column(VarKind::truck_count, c, 0.0, kUnbounded,
                                    annuitize(tr.capex_per_truck, tr.lifetime_years, rate));
    const double st_inv = annuitize(tr.loading_station_capex, tr.lifetime_years, rate);
    for (int z = 0; z < Z; ++z) {
      Coord cz;
      cz.entity = i16(tt);
      cz.zone = i16(z);
      station_cap[tt * Z + z] =
          lp.add_column(VarKind::truck_station_capacity, cz, 0.0, kUnbounded, st_inv);
    }
  }

  // ---- operational columns ----

  const auto PH = static_cast<std::size_t>(P) * H;
  auto ph = [&](int p, int h) { return static_cast<std::size_t>(p) * H + h; };

  // thermal / H2 production / G2P dispatch
  std::vector<int> out_col(static_cast<std::size_t>(G) * Z * PH, -1);
  std::vector<int> commit_col, start_col, shut_col;
  auto gzph = [&](int g, int z, int p, int h) {
    return (static_cast<std::size_t>(g) * Z + z) * PH + ph(p, h);
  };
  {
    bool any_uc = false;
    for (int g = 0; g < G; ++g) any_uc = any_uc || (gen_active[g] && spec.gen_techs[g].uc_modelled);
    if (any_uc) {
      commit_col.assign(static_cast<std::size_t>(G) * Z * PH, -1);
      start_col.assign(static_cast<std::size_t>(G) * Z * PH, -1);
      shut_col.assign(static_cast<std::size_t>(G) * Z * PH, -1);
    }
  }
  for (int g = 0; g < G; ++g) {
    if (!gen_active[g]) continue;
    const GenTech& t = spec.gen_techs[g];
    const OperatingCoefficients oc = derive_operating_coefficients(t, pol);
    for (int z = 0; z < Z; ++z) {
      if (gen_cap[g * Z + z] < 0) continue;
      for (int p = 0; p < P; ++p) {
        const double mc = wgt(p) * oc.marginal_cost();
        for (int h = 0; h < H; ++h) {
          out_col[gzph(g, z, p, h)] =
              lp.add_column(VarKind::gen_output, pcoord(g, z, p, h), 0.0, kUnbounded, mc);
          if (t.uc_modelled) {
            commit_col[gzph(g, z, p, h)] =
                lp.add_column(VarKind::commit_level, pcoord(g, z, p, h), 0.0, kUnbounded, 0.0);
            start_col[gzph(g, z, p, h)] =
                lp.add_column(VarKind::startup, pcoord(g, z, p, h), 0.0, kUnbounded, 0.0);
            shut_col[gzph(g, z, p, h)] =
                lp.add_column(VarKind::shutdown, pcoord(g, z, p, h), 0.0, kUnbounded, 0.0);
          }
        }
      }
    }
  }

  // VRE dispatch
  std::vector<int> vre_out(static_cast<std::size_t>(B) * PH, -1);
  for (int b = 0; b < B; ++b) {
    const GenTech* t = spec.find_gen_tech(spec.vre_bins[b].tech_id);
    const OperatingCoefficients oc = derive_operating_coefficients(*t, pol);
    const int z = spec.vre_bins[b].zone - 1;
    for (int p = 0; p < P; ++p)
      for (int h = 0; h < H; ++h)
        vre_out[b * PH + ph(p, h)] = lp.add_column(
            VarKind::vre_output, pcoord(b, z, p, h), 0.0, kUnbounded, wgt(p) * oc.marginal_cost());
  }

  // storage operation
  std::vector<int> ch_col(static_cast<std::size_t>(S) * Z * PH, -1);
  std::vector<int> dis_col(static_cast<std::size_t>(S) * Z * PH, -1);
  std::vector<int> inv_col(static_cast<std::size_t>(S) * Z * PH, -1);
  auto szph = [&](int s, int z, int p, int h) {
    return (static_cast<std::size_t>(s) * Z + z) * PH + ph(p, h);
  };
  for (int s = 0; s < S; ++s)
    for (int z = 0; z < Z; ++z)
      for (int p = 0; p < P; ++p)
        for (int h = 0; h < H; ++h) {
          ch_col[szph(s, z, p, h)] =
              lp.add_column(VarKind::charge, pcoord(s, z, p, h), 0.0, kUnbounded, 0.0);
          dis_col[szph(s, z, p, h)] =
              lp.add_column(VarKind::discharge, pcoord(s, z, p, h), 0.0, kUnbounded, 0.0);
          inv_col[szph(s, z, p, h)] =
              lp.add_column(VarKind::inventory, pcoord(s, z, p, h), 0.0, kUnbounded, 0.0);
        }

  // transmission flows
  std::vector<int> flow_col(static_cast<std::size_t>(R) * 2 * PH, -1);
  auto rdph = [&](int r, int d, int p, int h) {
    return (static_cast<std::size_t>(r) * 2 + d) * PH + ph(p, h);
  };
  for (int r = 0; r < R; ++r)
    for (int d = 0; d < 2; ++d)
      for (int p = 0; p < P; ++p)
        for (int h = 0; h < H; ++h)
          flow_col[rdph(r, d, p, h)] =
              lp.add_column(VarKind::line_flow, rcoord(-1, r, d, -1, p, h), 0.0, kUnbounded, 0.0);

  // pipeline flows and linepack
  std::vector<int> pipe_flow(static_cast<std::size_t>(PT) * R * 2 * 2 * PH, -1);
  std::vector<int> pack_col(static_cast<std::size_t>(PT) * R * PH, -1);
  auto qrdsph = [&](int q, int r, int d, int st, int p, int h) {
    return (((static_cast<std::size_t>(q) * R + r) * 2 + d) * 2 + st) * PH + ph(p, h);
  };
  auto qrph = [&](int q, int r, int p, int h) {
    return (static_cast<std::size_t>(q) * R + r) * PH + ph(p, h);
  };
  for (int q = 0; q < PT; ++q)
    for (int r = 0; r < R; ++r) {
      if (pipe_units[q * R + r] < 0) continue;
      const bool pack = spec.pipeline_types[q].linepack_fraction > 0.0;
      for (int p = 0; p < P; ++p)
        for (int h = 0; h < H; ++h) {
          for (int d = 0; d < 2; ++d)
            for (int st = 0; st < 2; ++st)
              pipe_flow[qrdsph(q, r, d, st, p, h)] = lp.add_column(
                  VarKind::pipeline_flow, rcoord(q, r, d, st, p, h), 0.0, kUnbounded, 0.0);
          if (pack)
            pack_col[qrph(q, r, p, h)] = lp.add_column(
                VarKind::linepack_inventory, rcoord(q, r, -1, -1, p, h), 0.0, kUnbounded, 0.0);
        }
    }

  // truck operation
  std::vector<int> at_col(static_cast<std::size_t>(TT) * Z * 2 * PH, -1);
  std::vector<int> load_col(static_cast<std::size_t>(TT) * Z * PH, -1);
  std::vector<int> unload_col(static_cast<std::size_t>(TT) * Z * PH, -1);
  std::vector<int> dep_col(static_cast<std::size_t>(TT) * R * 2 * 2 * PH, -1);
  std::vector<int> transit_col(static_cast<std::size_t>(TT) * R * 2 * 2 * PH, -1);
  auto tzsph = [&](int tt, int z, int st, int p, int h) {
    return ((static_cast<std::size_t>(tt) * Z + z) * 2 + st) * PH + ph(p, h);
  };
  auto tzph = [&](int tt, int z, int p, int h) {
    return (static_cast<std::size_t>(tt) * Z + z) * PH + ph(p, h);
  };
  auto trdsph = [&](int tt, int r, int d, int st, int p, int h) {
    return (((static_cast<std::size_t>(tt) * R + r) * 2 + d) * 2 + st) * PH + ph(p, h);
  };
  for (int tt = 0; tt < TT; ++tt) {
    if (truck_count[tt] < 0) continue;
    const TruckType& tr = spec.truck_types[tt];
    for (int z = 0; z < Z; ++z)
      for (int p = 0; p < P; ++p)
        for (int h = 0; h < H; ++h) {
          for (int st = 0; st < 2; ++st)
            at_col[tzsph(tt, z, st, p, h)] = lp.add_column(
                VarKind::trucks_at_zone, zscoord(tt, z, st, p, h), 0.0, kUnbounded, 0.0);
          load_col[tzph(tt, z, p, h)] =
              lp.add_column(VarKind::truck_load, pcoord(tt, z, p, h), 0.0, kUnbounded, 0.0);
          unload_col[tzph(tt, z, p, h)] =
              lp.add_column(VarKind::truck_unload, pcoord(tt, z, p, h), 0.0, kUnbounded, 0.0);
        }
    for (std::size_t k = 0; k < truck_routes[tt].size(); ++k) {
      const int r = truck_routes[tt][k];
      const double miles = spec.routes[r].distance_miles;
      for (int d = 0; d < 2; ++d)
        for (int st = 0; st < 2; ++st)
          for (int p = 0; p < P; ++p) {
            const double trip_cost = wgt(p) * tr.opex_per_mile * miles;
            for (int h = 0; h < H; ++h) {
              dep_col[trdsph(tt, r, d, st, p, h)] =
                  lp.add_column(VarKind::truck_departure, rcoord(tt, r, d, st, p, h), 0.0,
                                kUnbounded, trip_cost);
              transit_col[trdsph(tt, r, d, st, p, h)] = lp.add_column(
                  VarKind::trucks_in_transit, rcoord(tt, r, d, st, p, h), 0.0, kUnbounded, 0.0);
            }
          }
    }
  }

  // unserved demand
  std::vector<int> nse_p_col(static_cast<std::size_t>(Z) * PH, -1);
  std::vector<int> nse_h_col(static_cast<std::size_t>(Z) * PH, -1);
  auto zph = [&](int z, int p, int h) { return static_cast<std::size_t>(z) * PH + ph(p, h); };
  for (int z = 0; z < Z; ++z)
    for (int p = 0; p < P; ++p)
      for (int h = 0; h < H; ++h) {
        const double dp = spec.zones[z].demand_power[src(p, h)] * opt.power_demand_multiplier;
        const double dh = spec.zones[z].demand_h2[src(p, h)] * opt.h2_demand_multiplier;
        nse_p_col[zph(z, p, h)] = lp.add_column(VarKind::nse_power, pcoord(-1, z, p, h), 0.0,
                                                std::max(0.0, dp), wgt(p) * pol.voll_power);
        nse_h_col[zph(z, p, h)] =
            lp.add_column(VarKind::nse_h2, pcoord(-1, z, p, h), 0.0, std::max(0.0, dh),
                          wgt(p) * pol.voll_h2 * kKgPerTonne);
      }

  // ---- rows ----

  // incidence lists speed up the balance loops
  std::vector<std::vector<int>> routes_from(Z), routes_to(Z);
  for (int r = 0; r < R; ++r) {
    routes_from[spec.routes[r].from_zone - 1].push_back(r);
    routes_to[spec.routes[r].to_zone - 1].push_back(r);
  }

  // electricity balance
  for (int z = 0; z < Z; ++z)
    for (int p = 0; p < P; ++p)
      for (int h = 0; h < H; ++h) {
        const double demand =
            spec.zones[z].demand_power[src(p, h)] * opt.power_demand_multiplier;
        lp.begin_row(RowKind::power_balance, pcoord(-1, z, p, h), RowSense::eq, demand);

        for (int g = 0; g < G; ++g) {
          const int oc = out_col[gzph(g, z, p, h)];
          if (oc < 0) continue;
          const GenTech& t = spec.gen_techs[g];
          if (t.sector == Sector::power) lp.coef(oc, 1.0);
          double ein = 0.0;
          if (t.coupling_role == CouplingRole::p2h)
            ein = electricity_input_for_h2(t, 1.0);
          else if (t.electricity_input_per_output > 0.0)
            ein = t.electricity_input_per_output;
          if (ein > 0.0) lp.coef(oc, -ein);
        }
        for (int b = 0; b < B; ++b)
          if (spec.vre_bins[b].zone - 1 == z) lp.coef(vre_out[b * PH + ph(p, h)], 1.0);
        for (int s = 0; s < S; ++s) {
          const StorageTech& st = spec.storage_techs[s];
          if (st.carrier == Carrier::electricity) {
            lp.coef(dis_col[szph(s, z, p, h)], 1.0);
            lp.coef(ch_col[szph(s, z, p, h)], -1.0);
          } else if (st.charge_electricity > 0.0) {
            lp.coef(ch_col[szph(s, z, p, h)], -st.charge_electricity);
          }
        }
        for (int r : routes_from[z]) {
          const double eff =
              1.0 - spec.transmission.loss_per_100_miles * spec.routes[r].distance_miles / 100.0;
          lp.coef(flow_col[rdph(r, 0, p, h)], -1.0);       // sending out
          lp.coef(flow_col[rdph(r, 1, p, h)], eff);        // receiving the reverse direction
        }
        for (int r : routes_to[z]) {
          const double eff =
              1.0 - spec.transmission.loss_per_100_miles * spec.routes[r].distance_miles / 100.0;
          lp.coef(flow_col[rdph(r, 0, p, h)], eff);
          lp.coef(flow_col[rdph(r, 1, p, h)], -1.0);
        }
        for (int tt = 0; tt < TT; ++tt) {
          if (truck_count[tt] < 0) continue;
          const TruckType& tr = spec.truck_types[tt];
          if (tr.loading_electricity > 0.0)
            lp.coef(load_col[tzph(tt, z, p, h)], -tr.payload_tonne * tr.loading_electricity);
        }
        for (int q = 0; q < PT; ++q) {
          const PipelineType& pt = spec.pipeline_types[q];
          for (int r : routes_from[z]) {
            if (pipe_units[q * R + r] < 0) continue;
            const double e = pt.compression_electricity_per_tonne +
                             pt.compression_electricity_per_tonne_mile *
                                 spec.routes[r].distance_miles;
            if (e > 0.0) lp.coef(pipe_flow[qrdsph(q, r, 0, 0, p, h)], -e);  // send fwd from here
          }
          for (int r : routes_to[z]) {
            if (pipe_units[q * R + r] < 0) continue;
            const double e = pt.compression_electricity_per_tonne +
                             pt.compression_electricity_per_tonne_mile *
                                 spec.routes[r].distance_miles;
            if (e > 0.0) lp.coef(pipe_flow[qrdsph(q, r, 1, 0, p, h)], -e);  // send bwd from here
          }
        }
        lp.coef(nse_p_col[zph(z, p, h)], 1.0);
      }

  // hydrogen balance, tonnes
  for (int z = 0; z < Z; ++z)
    for (int p = 0; p < P; ++p)
      for (int h = 0; h < H; ++h) {
        const double demand = spec.zones[z].demand_h2[src(p, h)] * opt.h2_demand_multiplier;
        lp.begin_row(RowKind::h2_balance, pcoord(-1, z, p, h), RowSense::eq, demand);

        for (int g = 0; g < G; ++g) {
          const int oc = out_col[gzph(g, z, p, h)];
          if (oc < 0) continue;
          const GenTech& t = spec.gen_techs[g];
          if (t.sector == Sector::hydrogen) lp.coef(oc, 1.0);
          if (t.coupling_role == CouplingRole::g2p)
            lp.coef(oc, -1.0 / (t.efficiency_lhv * kLhvH2MwhPerTonne));
        }
        for (int s = 0; s < S; ++s) {
          if (spec.storage_techs[s].carrier == Carrier::electricity) continue;
          lp.coef(dis_col[szph(s, z, p, h)], 1.0);
          lp.coef(ch_col[szph(s, z, p, h)], -1.0);
        }
        for (int tt = 0; tt < TT; ++tt) {
          if (truck_count[tt] < 0) continue;
          const TruckType& tr = spec.truck_types[tt];
          lp.coef(unload_col[tzph(tt, z, p, h)], tr.payload_tonne);
          lp.coef(load_col[tzph(tt, z, p, h)], -tr.payload_tonne);
          if (tr.boiloff_per_day > 0.0) {
            // transit boiloff booked on arrival of each loaded truck
            for (std::size_t k = 0; k < truck_routes[tt].size(); ++k) {
              const int r = truck_routes[tt][k];
              const int lag = truck_lag[tt][k];
              const double loss =
                  tr.payload_tonne * tr.boiloff_per_day * static_cast<double>(lag) / 24.0;
              if (spec.routes[r].to_zone - 1 == z)
                lp.coef(dep_col[trdsph(tt, r, 0, 0, p, lag_h(h, lag))], -loss);
              if (spec.routes[r].from_zone - 1 == z)
                lp.coef(dep_col[trdsph(tt, r, 1, 0, p, lag_h(h, lag))], -loss);
            }
          }
        }
        for (int q = 0; q < PT; ++q)
          for (int r : routes_from[z]) {
            if (pipe_units[q * R + r] < 0) continue;
            lp.coef(pipe_flow[qrdsph(q, r, 0, 0, p, h)], -1.0);  // send fwd
            lp.coef(pipe_flow[qrdsph(q, r, 1, 1, p, h)], 1.0);   // receive bwd
          }
        for (int q = 0; q < PT; ++q)
          for (int r : routes_to[z]) {
            if (pipe_units[q * R + r] < 0) continue;
            lp.coef(pipe_flow[qrdsph(q, r, 1, 0, p, h)], -1.0);  // send bwd
            lp.coef(pipe_flow[qrdsph(q, r, 0, 1, p, h)], 1.0);   // receive fwd
          }
        lp.coef(nse_h_col[zph(z, p, h)], 1.0);
      }

  // VRE availability / weekly budgets
  for (int b = 0; b < B; ++b) {
    const VreSupplyBin& bin = spec.vre_bins[b];
    for (int p = 0; p < P; ++p) {
      for (int h = 0; h < H; ++h) {
        const double cf = bin.weekly_energy_budget ? 1.0 : bin.profile[src(p, h)];
        lp.begin_row(RowKind::vre_availability, pcoord(b, bin.zone - 1, p, h), RowSense::le, 0.0);
        lp.coef(vre_out[b * PH + ph(p, h)], 1.0);
        lp.coef(bin_cap[b], -cf);
      }
      if (bin.weekly_energy_budget) {
        double cfsum = 0.0;
        for (int h = 0; h < H; ++h) cfsum += bin.profile[src(p, h)];
        lp.begin_row(RowKind::vre_weekly_budget, pcoord(b, bin.zone - 1, p, -1), RowSense::le,
                     0.0);
        for (int h = 0; h < H; ++h) lp.coef(vre_out[b * PH + ph(p, h)], 1.0);
        lp.coef(bin_cap[b], -cfsum);
      }
    }
  }

  // storage operating envelope and inventory dynamics
  //
  // linked_chronological chains inventory through the periods in source
  // order (one pass around the year) and closes the weighted annual mass
  // balance per store. Without the closure row a small-weight period could
  // drain inventory that the weighted flows never put in, i.e. the model
  // would mint stored energy.
  const bool linked = opt.storage_linkage == StorageLinkage::linked_chronological;
  std::vector<int> chron(P);
  for (int p = 0; p < P; ++p) chron[p] = p;
  std::sort(chron.begin(), chron.end(), [&](int a, int b) {
    return tl.periods[a].source_start_hour < tl.periods[b].source_start_hour;
  });
  std::vector<int> chron_prev(P), chron_next(P);
  for (int i = 0; i < P; ++i) {
    chron_prev[chron[i]] = chron[(i + P - 1) % P];
    chron_next[chron[i]] = chron[(i + 1) % P];
  }

  for (int s = 0; s < S; ++s) {
    const StorageTech& st = spec.storage_techs[s];
    const double sqrt_rte = std::sqrt(st.round_trip_efficiency);
    const double keep = 1.0 - st.boiloff_per_day / 24.0;
    for (int z = 0; z < Z; ++z) {
      for (int p = 0; p < P; ++p)
        for (int h = 0; h < H; ++h) {
          lp.begin_row(RowKind::storage_charge_limit, pcoord(s, z, p, h), RowSense::le, 0.0);
          lp.coef(ch_col[szph(s, z, p, h)], 1.0);
          lp.coef(sto_pow[s * Z + z], -1.0);
          lp.begin_row(RowKind::storage_discharge_limit, pcoord(s, z, p, h), RowSense::le, 0.0);
          lp.coef(dis_col[szph(s, z, p, h)], 1.0);
          lp.coef(sto_pow[s * Z + z], -1.0);
          lp.begin_row(RowKind::storage_energy_limit, pcoord(s, z, p, h), RowSense::le, 0.0);
          lp.coef(inv_col[szph(s, z, p, h)], 1.0);
          lp.coef(sto_en[s * Z + z], -1.0);

          int pp = p, hp = prev_h(h);
          if (h == 0 && linked) pp = chron_prev[p];
          lp.begin_row(RowKind::storage_balance, pcoord(s, z, p, h), RowSense::eq, 0.0);
          lp.coef(inv_col[szph(s, z, p, h)], 1.0);
          lp.coef(inv_col[szph(s, z, pp, hp)], -keep);
          lp.coef(ch_col[szph(s, z, p, h)], -sqrt_rte);
          lp.coef(dis_col[szph(s, z, p, h)], 1.0 / sqrt_rte);
        }
      if (linked) {
        // sum over periods of weight x (end inventory - decayed carry-in) = 0
        const double kp = std::pow(keep, H);
        bool nonzero = false;
        for (int p = 0; p < P; ++p)
          if (std::abs(wgt(p) - kp * wgt(chron_next[p])) > 1e-12) nonzero = true;
        if (nonzero) {
          lp.begin_row(RowKind::storage_year_closure, pcoord(s, z, -1, -1), RowSense::eq, 0.0);
          for (int p = 0; p < P; ++p)
            lp.coef(inv_col[szph(s, z, p, H - 1)], wgt(p) - kp * wgt(chron_next[p]));
        }
      }
    }
  }

  // dispatch limits and linearized commitment
  for (int g = 0; g < G; ++g) {
    if (!gen_active[g]) continue;
    const GenTech& t = spec.gen_techs[g];
    for (int z = 0; z < Z; ++z) {
      if (gen_cap[g * Z + z] < 0) continue;
      for (int p = 0; p < P; ++p)
        for (int h = 0; h < H; ++h) {
          const std::size_t cur = gzph(g, z, p, h);
          if (!t.uc_modelled) {
            lp.begin_row(RowKind::output_commit_limit, pcoord(g, z, p, h), RowSense::le, 0.0);
            lp.coef(out_col[cur], 1.0);
            lp.coef(gen_cap[g * Z + z], -1.0);
            continue;
          }
          const std::size_t prv = gzph(g, z, p, prev_h(h));
          lp.begin_row(RowKind::commit_capacity, pcoord(g, z, p, h), RowSense::le, 0.0);
          lp.coef(commit_col[cur], 1.0);
          lp.coef(gen_cap[g * Z + z], -1.0);

          lp.begin_row(RowKind::commit_transition, pcoord(g, z, p, h), RowSense::eq, 0.0);
          lp.coef(commit_col[cur], 1.0);
          lp.coef(commit_col[prv], -1.0);
          lp.coef(start_col[cur], -1.0);
          lp.coef(shut_col[cur], 1.0);

          lp.begin_row(RowKind::output_commit_limit, pcoord(g, z, p, h), RowSense::le, 0.0);
          lp.coef(out_col[cur], 1.0);
          lp.coef(commit_col[cur], -1.0);

          lp.begin_row(RowKind::output_min_stable, pcoord(g, z, p, h), RowSense::ge, 0.0);
          lp.coef(out_col[cur], 1.0);
          lp.coef(commit_col[cur], -t.min_stable_fraction);

          lp.begin_row(RowKind::ramp_up, pcoord(g, z, p, h), RowSense::le, 0.0);
          lp.coef(out_col[cur], 1.0);
          lp.coef(out_col[prv], -1.0);
          lp.coef(commit_col[cur], -t.ramp_fraction_per_hour);

          lp.begin_row(RowKind::ramp_down, pcoord(g, z, p, h), RowSense::le, 0.0);
          lp.coef(out_col[prv], 1.0);
          lp.coef(out_col[cur], -1.0);
          lp.coef(commit_col[prv], -t.ramp_fraction_per_hour);
        }
    }
  }

  // transmission capacity
  for (int r = 0; r < R; ++r) {
    const Route& rt = spec.routes[r];
    for (int p = 0; p < P; ++p)
      for (int h = 0; h < H; ++h) {
        lp.begin_row(RowKind::line_flow_limit, rcoord(-1, r, -1, -1, p, h), RowSense::le,
                     rt.existing_power_capacity_mw);
        lp.coef(flow_col[rdph(r, 0, p, h)], 1.0);
        lp.coef(flow_col[rdph(r, 1, p, h)], 1.0);
        if (line_add[r] >= 0) lp.coef(line_add[r], -1.0);
      }
  }

  // pipeline capacity, linepack dynamics
  for (int q = 0; q < PT; ++q) {
    const PipelineType& pt = spec.pipeline_types[q];
    for (int r = 0; r < R; ++r) {
      if (pipe_units[q * R + r] < 0) continue;
      const double theta = pt.flow_capacity_tonne_per_hour_per_unit;
      for (int p = 0; p < P; ++p)
        for (int h = 0; h < H; ++h) {
          lp.begin_row(RowKind::pipeline_flow_limit, rcoord(q, r, -1, 0, p, h), RowSense::le,
                       0.0);
          lp.coef(pipe_flow[qrdsph(q, r, 0, 0, p, h)], 1.0);
          lp.coef(pipe_flow[qrdsph(q, r, 1, 0, p, h)], 1.0);
          lp.coef(pipe_units[q * R + r], -theta);

          lp.begin_row(RowKind::pipeline_flow_limit, rcoord(q, r, -1, 1, p, h), RowSense::le,
                       0.0);
          lp.coef(pipe_flow[qrdsph(q, r, 0, 1, p, h)], 1.0);
          lp.coef(pipe_flow[qrdsph(q, r, 1, 1, p, h)], 1.0);
          lp.coef(pipe_units[q * R + r], -theta);

          lp.begin_row(RowKind::linepack_balance, rcoord(q, r, -1, -1, p, h), RowSense::eq, 0.0);
          const int pk = pack_col[qrph(q, r, p, h)];
          if (pk >= 0) {
            lp.coef(pk, 1.0);
            lp.coef(pack_col[qrph(q, r, p, prev_h(h))], -1.0);
          }
          lp.coef(pipe_flow[qrdsph(q, r, 0, 0, p, h)], -1.0);
          lp.coef(pipe_flow[qrdsph(q, r, 1, 0, p, h)], -1.0);
          lp.coef(pipe_flow[qrdsph(q, r, 0, 1, p, h)], 1.0);
          lp.coef(pipe_flow[qrdsph(q, r, 1, 1, p, h)], 1.0);

          if (pk >= 0) {
            lp.begin_row(RowKind::linepack_limit, rcoord(q, r, -1, -1, p, h), RowSense::le, 0.0);
            lp.coef(pk, 1.0);
            lp.coef(pipe_units[q * R + r], -pt.linepack_fraction * theta);
          }
        }
    }
  }

  // truck dynamics
  for (int tt = 0; tt < TT; ++tt) {
    if (truck_count[tt] < 0) continue;
    for (int z = 0; z < Z; ++z)
      for (int p = 0; p < P; ++p)
        for (int h = 0; h < H; ++h) {
          // loaded trucks parked at z
          lp.begin_row(RowKind::truck_state_balance, zscoord(tt, z, 0, p, h), RowSense::eq, 0.0);
          lp.coef(at_col[tzsph(tt, z, 0, p, h)], 1.0);
          lp.coef(at_col[tzsph(tt, z, 0, p, prev_h(h))], -1.0);
          lp.coef(load_col[tzph(tt, z, p, h)], -1.0);
          lp.coef(unload_col[tzph(tt, z, p, h)], 1.0);
          for (std::size_t k = 0; k < truck_routes[tt].size(); ++k) {
            const int r = truck_routes[tt][k];
            const int lag = truck_lag[tt][k];
            if (spec.routes[r].from_zone - 1 == z) {
              lp.coef(dep_col[trdsph(tt, r, 0, 0, p, h)], 1.0);               // depart fwd
              lp.coef(dep_col[trdsph(tt, r, 1, 0, p, lag_h(h, lag))], -1.0);  // arrive from bwd
            }
            if (spec.routes[r].to_zone - 1 == z) {
              lp.coef(dep_col[trdsph(tt, r, 1, 0, p, h)], 1.0);
              lp.coef(dep_col[trdsph(tt, r, 0, 0, p, lag_h(h, lag))], -1.0);
            }
          }

          // empty trucks parked at z
          lp.begin_row(RowKind::truck_state_balance, zscoord(tt, z, 1, p, h), RowSense::eq, 0.0);
          lp.coef(at_col[tzsph(tt, z, 1, p, h)], 1.0);
          lp.coef(at_col[tzsph(tt, z, 1, p, prev_h(h))], -1.0);
          lp.coef(load_col[tzph(tt, z, p, h)], 1.0);
          lp.coef(unload_col[tzph(tt, z, p, h)], -1.0);
          for (std::size_t k = 0; k < truck_routes[tt].size(); ++k) {
            const int r = truck_routes[tt][k];
            const int lag = truck_lag[tt][k];
            if (spec.routes[r].from_zone - 1 == z) {
              lp.coef(dep_col[trdsph(tt, r, 0, 1, p, h)], 1.0);
              lp.coef(dep_col[trdsph(tt, r, 1, 1, p, lag_h(h, lag))], -1.0);
            }
            if (spec.routes[r].to_zone - 1 == z) {
              lp.coef(dep_col[trdsph(tt, r, 1, 1, p, h)], 1.0);
              lp.coef(dep_col[trdsph(tt, r, 0, 1, p, lag_h(h, lag))], -1.0);
            }
          }

          // loading/unloading throughput
          const TruckType& tr = spec.truck_types[tt];
          lp.begin_row(RowKind::truck_station_limit, pcoord(tt, z, p, h), RowSense::le, 0.0);
          lp.coef(load_col[tzph(tt, z, p, h)], tr.payload_tonne);
          lp.coef(unload_col[tzph(tt, z, p, h)], tr.payload_tonne);
          lp.coef(station_cap[tt * Z + z], -1.0);
        }

    // trucks on the road
    for (std::size_t k = 0; k < truck_routes[tt].size(); ++k) {
      const int r = truck_routes[tt][k];
      const int lag = truck_lag[tt][k];
      for (int d = 0; d < 2; ++d)
        for (int st = 0; st < 2; ++st)
          for (int p = 0; p < P; ++p)
            for (int h = 0; h < H; ++h) {
              lp.begin_row(RowKind::truck_transit_balance, rcoord(tt, r, d, st, p, h),
                           RowSense::eq, 0.0);
              lp.coef(transit_col[trdsph(tt, r, d, st, p, h)], 1.0);
              lp.coef(transit_col[trdsph(tt, r, d, st, p, prev_h(h))], -1.0);
              lp.coef(dep_col[trdsph(tt, r, d, st, p, h)], -1.0);
              lp.coef(dep_col[trdsph(tt, r, d, st, p, lag_h(h, lag))], 1.0);
            }
    }

    // the fleet adds up once per period; the balances propagate it hourly
    for (int p = 0; p < P; ++p) {
      lp.begin_row(RowKind::truck_conservation, rcoord(tt, -1, -1, -1, p, 0), RowSense::eq, 0.0);
      for (int z = 0; z < Z; ++z)
        for (int st = 0; st < 2; ++st) lp.coef(at_col[tzsph(tt, z, st, p, 0)], 1.0);
      for (std::size_t k = 0; k < truck_routes[tt].size(); ++k) {
        const int r = truck_routes[tt][k];
        for (int d = 0; d < 2; ++d)
          for (int st = 0; st < 2; ++st) lp.coef(transit_col[trdsph(tt, r, d, st, p, 0)], 1.0);
      }
      lp.coef(truck_count[tt], -1.0);
    }
  }

  lp.finalize();
  return lp;
}

double sum_columns(const LinearProgram& lp, const std::vector<double>& x, VarKind kind) {
  double s = 0.0;
  for (int j = 0; j < lp.n_cols(); ++j)
    if (lp.col_kind(j) == kind) s += x[j];
  return s;
}

void for_each_column(const LinearProgram& lp, VarKind kind,
                     const std::function<void(int col, const Coord&)>& fn) {
  for (int j = 0; j < lp.n_cols(); ++j)
    if (lp.col_kind(j) == kind) fn(j, lp.col_coord(j));
}

std::vector<double> warm_start_point(const LinearProgram& lp) {
  std::vector<double> x(lp.n_cols(), 0.0);
  for (int j = 0; j < lp.n_cols(); ++j) {
    const VarKind k = lp.col_kind(j);
    if (k == VarKind::nse_power || k == VarKind::nse_h2) {
      x[j] = lp.upper_bounds()[j];
    } else {
      const double lb = lp.lower_bounds()[j];
      x[j] = (lb <= -kUnbounded * 0.5) ? 0.0 : lb;
    }
  }
  return x;
}

}  // namespace eh2
