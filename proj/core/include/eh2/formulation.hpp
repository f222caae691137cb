#pragma once

#include <functional>

#include "eh2/lp.hpp"
#include "eh2/system.hpp"
#include "eh2/timeline.hpp"

namespace eh2 {

// How storage inventories connect across the reduced timeline: each period
// wraps onto itself, or periods chain in chronological order with the last
// wrapping back to the first. Truck fleets, linepack and unit commitment are
// always cyclic within a period.
enum class StorageLinkage { cyclic_week, linked_chronological };

struct FormulationOptions {
  StorageLinkage storage_linkage = StorageLinkage::cyclic_week;
  double pipeline_capex_multiplier = 1.0;  // scales pipe and compression capex
  double h2_demand_multiplier = 1.0;
  double power_demand_multiplier = 1.0;
};

// Assembles the annual planning LP (costs in $/yr, minimization) over the
// reduced timeline. Column/row coordinates use:
//   entity: index into the owning catalog (gen_techs, vre_bins, storage_techs,
//           truck_types, pipeline_types)
//   zone:   0-based zone index
//   route:  index into spec.routes
//   dir:    0 = from->to, 1 = to->from
//   state:  trucks 0 = loaded, 1 = empty; pipeline flows 0 = send, 1 = receive
//   week:   period index in the timeline, hour: hour within the period
// The returned program is finalized.
LinearProgram build_model(const SystemSpec& spec, const ReducedTimeline& tl,
                          const FormulationOptions& opt = {});

// Reporting helpers over annotated columns.
double sum_columns(const LinearProgram& lp, const std::vector<double>& x, VarKind kind);
void for_each_column(const LinearProgram& lp, VarKind kind,
                     const std::function<void(int col, const Coord&)>& fn);

// Natural feasible point for a freshly built model: every activity at zero
// and unserved energy covering demand. Satisfies all rows, so the solver can
// skip phase 1 when handed this as a hint.
std::vector<double> warm_start_point(const LinearProgram& lp);

}  // namespace eh2
