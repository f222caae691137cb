#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eh2/system.hpp"

namespace eh2 {

struct TimelineOptions {
  int hours_per_period = 168;  // one week
  int n_periods = 8;           // representative periods, extremes included
  bool include_extremes = true;
  uint64_t seed = 1;
  int kmeans_restarts = 5;
  int kmeans_max_iter = 100;
};

struct ReducedPeriod {
  int source_start_hour = 0;  // offset into the hourly input series
  double weight = 0.0;        // occurrences per modeled year
  int cluster_size = 1;       // candidate periods this one stands in for
  bool is_extreme = false;
  std::string extreme_tag;    // "peak_power_demand", "min_vre_cf"
};

struct TimelineDiagnostics {
  std::vector<double> inertia_by_iteration;  // winning restart, assignment steps
  double inertia = 0.0;
  int candidate_periods = 0;
  int clustered_periods = 0;
  int restarts = 0;
};

struct ReducedTimeline {
  int hours_per_period = 168;
  std::vector<ReducedPeriod> periods;  // chronological by source_start_hour
  TimelineDiagnostics diagnostics;

  int n_periods() const { return static_cast<int>(periods.size()); }
  // sum of weight * hours_per_period over all periods; 8760 by construction
  double total_weight_hours() const;
};

// Clusters candidate periods of the hourly input into n_periods
// representatives. Features are the per-zone demand series (normalized by
// their horizon maxima) and every VRE bin profile. The peak power demand
// period and the minimum demand-weighted VRE availability period are kept
// as their own singletons before clustering the rest. Representatives are
// medoids, the candidate closest to each centroid. Every candidate carries
// (8760 / hours_per_period) / n_candidates occurrences per modeled year, so
// a cluster's weight is its size times that share and the total closes to
// 8760 hours exactly.
ReducedTimeline build_timeline(const SystemSpec& spec, const TimelineOptions& opt);

// All candidate periods kept, each with the uniform per-candidate weight.
ReducedTimeline full_timeline(const SystemSpec& spec, int hours_per_period = 168);

std::string timeline_to_json(const ReducedTimeline& tl);
ReducedTimeline timeline_from_json(const std::string& text);

}  // namespace eh2
