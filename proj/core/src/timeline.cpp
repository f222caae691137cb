#include "eh2/timeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "eh2/units.hpp"
#include "json.hpp"

namespace eh2 {

double ReducedTimeline::total_weight_hours() const {
  double s = 0.0;
  for (const auto& p : periods) s += p.weight * hours_per_period;
  return s;
}

namespace {

// uniform double in [0,1) from the top 53 bits; avoids std distributions so
// the stream is identical across standard libraries
double unit_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

struct KmeansResult {
  std::vector<int> assignment;
  std::vector<std::vector<double>> centroids;
  std::vector<double> inertia_steps;
  double inertia = 0.0;
};

KmeansResult kmeans(const std::vector<std::vector<double>>& pts, int k, std::mt19937_64& rng,
                    int max_iter) {
  const int n = static_cast<int>(pts.size());
  KmeansResult res;
  res.centroids.reserve(k);

  // k-means++ seeding
  {
    const int first = static_cast<int>(unit_double(rng) * n);
    res.centroids.push_back(pts[std::min(first, n - 1)]);
    std::vector<double> d2(n);
    for (int c = 1; c < k; ++c) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& ctr : res.centroids) best = std::min(best, sq_dist(pts[i], ctr));
        d2[i] = best;
        total += best;
      }
      int pick = 0;
      if (total > 0.0) {
        const double r = unit_double(rng) * total;
        double acc = 0.0;
        pick = n - 1;
        for (int i = 0; i < n; ++i) {
          acc += d2[i];
          if (acc > r) { pick = i; break; }
        }
      } else {
        pick = static_cast<int>(unit_double(rng) * n);
        pick = std::min(pick, n - 1);
      }
      res.centroids.push_back(pts[pick]);
    }
  }

  res.assignment.assign(n, -1);
  const std::size_t dim = pts.empty() ? 0 : pts[0].size();
  for (int iter = 0; iter < max_iter; ++iter) {
    bool changed = false;
    double inertia = 0.0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bd = sq_dist(pts[i], res.centroids[0]);
      for (int c = 1; c < k; ++c) {
        const double d = sq_dist(pts[i], res.centroids[c]);
        if (d < bd) { bd = d; best = c; }
      }
      if (best != res.assignment[i]) { res.assignment[i] = best; changed = true; }
      inertia += bd;
    }
    res.inertia_steps.push_back(inertia);
    res.inertia = inertia;
    if (!changed && iter > 0) break;

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<int> counts(k, 0);
    for (int i = 0; i < n; ++i) {
      counts[res.assignment[i]]++;
      for (std::size_t d = 0; d < dim; ++d) sums[res.assignment[i]][d] += pts[i][d];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) {
        // reseed an empty cluster with the point farthest from its centroid
        int far = 0;
        double fd = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d = sq_dist(pts[i], res.centroids[res.assignment[i]]);
          if (d > fd) { fd = d; far = i; }
        }
        res.centroids[c] = pts[far];
        res.assignment[far] = c;
        changed = true;
      } else {
        for (std::size_t d = 0; d < dim; ++d) res.centroids[c][d] = sums[c][d] / counts[c];
      }
    }
  }
  return res;
}

std::vector<std::vector<double>> build_features(const SystemSpec& spec, int H, int n_cand) {
  // per-series normalization by horizon max so demand and availability
  // features carry comparable magnitudes
  std::vector<const std::vector<double>*> series;
  for (const auto& z : spec.zones) {
    series.push_back(&z.demand_power);
    series.push_back(&z.demand_h2);
  }
  for (const auto& b : spec.vre_bins) series.push_back(&b.profile);

  std::vector<std::vector<double>> feats(n_cand);
  for (auto& f : feats) f.reserve(series.size() * H);
  for (const auto* s : series) {
    double mx = 0.0;
    for (double v : *s) mx = std::max(mx, std::abs(v));
    const double scale = mx > 0.0 ? 1.0 / mx : 0.0;
    for (int w = 0; w < n_cand; ++w) {
      const int off = w * H;
      for (int h = 0; h < H; ++h) feats[w].push_back((*s)[off + h] * scale);
    }
  }
  return feats;
}

}  // namespace

ReducedTimeline build_timeline(const SystemSpec& spec, const TimelineOptions& opt) {
  const int H = opt.hours_per_period;
  if (H <= 0) throw std::invalid_argument("build_timeline: hours_per_period must be positive");
  const int n_hours = spec.n_hours();
  const int n_cand = n_hours / H;
  if (n_cand < 1) throw std::invalid_argument("build_timeline: input shorter than one period");
  if (opt.n_periods < 1) throw std::invalid_argument("build_timeline: n_periods must be positive");

  const double share = (kHoursPerYear / H) / n_cand;  // occurrences/yr per candidate

  ReducedTimeline tl;
  tl.hours_per_period = H;
  tl.diagnostics.candidate_periods = n_cand;

  if (opt.n_periods >= n_cand) {
    for (int w = 0; w < n_cand; ++w)
      tl.periods.push_back({w * H, share, 1, false, ""});
    return tl;
  }

  // extreme periods: peak hourly system power demand, and the period with the
  // lowest demand-weighted mean VRE availability
  std::vector<std::pair<int, std::string>> extremes;
  if (opt.include_extremes) {
    int peak_w = 0;
    double peak = -1.0;
    for (int w = 0; w < n_cand; ++w) {
      for (int h = 0; h < H; ++h) {
        double tot = 0.0;
        for (const auto& z : spec.zones) tot += z.demand_power[w * H + h];
        if (tot > peak) { peak = tot; peak_w = w; }
      }
    }
    extremes.emplace_back(peak_w, "peak_power_demand");

    if (!spec.vre_bins.empty()) {
      int lean_w = 0;
      double lean = std::numeric_limits<double>::infinity();
      for (int w = 0; w < n_cand; ++w) {
        double num = 0.0, den = 0.0;
        for (int h = 0; h < H; ++h) {
          double d = 0.0;
          for (const auto& z : spec.zones) d += z.demand_power[w * H + h];
          double cf = 0.0;
          for (const auto& b : spec.vre_bins) cf += b.profile[w * H + h];
          cf /= static_cast<double>(spec.vre_bins.size());
          num += d * cf;
          den += d;
        }
        const double score = den > 0.0 ? num / den : 0.0;
        if (score < lean) { lean = score; lean_w = w; }
      }
      if (lean_w != extremes[0].first) extremes.emplace_back(lean_w, "min_vre_cf");
      else extremes[0].second = "peak_power_demand,min_vre_cf";
    }
  }

  const int k = opt.n_periods - static_cast<int>(extremes.size());
  if (k < 1)
    throw std::invalid_argument("build_timeline: n_periods leaves no room for clusters");

  std::vector<int> pool;  // candidate indices that go through clustering
  pool.reserve(n_cand);
  for (int w = 0; w < n_cand; ++w) {
    bool is_ext = false;
    for (const auto& [ew, tag] : extremes) is_ext = is_ext || ew == w;
    if (!is_ext) pool.push_back(w);
  }
  tl.diagnostics.clustered_periods = static_cast<int>(pool.size());

  const auto all_feats = build_features(spec, H, n_cand);
  std::vector<std::vector<double>> pts;
  pts.reserve(pool.size());
  for (int w : pool) pts.push_back(all_feats[w]);

  std::mt19937_64 rng(opt.seed);
  KmeansResult best;
  bool have = false;
  for (int r = 0; r < std::max(1, opt.kmeans_restarts); ++r) {
    KmeansResult cur = kmeans(pts, k, rng, opt.kmeans_max_iter);
    if (!have || cur.inertia < best.inertia) {
      best = std::move(cur);
      have = true;
    }
  }
  tl.diagnostics.inertia = best.inertia;
  tl.diagnostics.inertia_by_iteration = best.inertia_steps;
  tl.diagnostics.restarts = std::max(1, opt.kmeans_restarts);

  for (const auto& [w, tag] : extremes)
    tl.periods.push_back({w * H, share, 1, true, tag});

  for (int c = 0; c < k; ++c) {
    int medoid = -1, size = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (best.assignment[i] != c) continue;
      size++;
      const double d = sq_dist(pts[i], best.centroids[c]);
      if (d < bd) { bd = d; medoid = pool[i]; }
    }
    if (medoid < 0) continue;  // empty cluster after reseed exhaustion
    tl.periods.push_back({medoid * H, share * size, size, false, ""});
  }

  std::sort(tl.periods.begin(), tl.periods.end(),
            [](const ReducedPeriod& a, const ReducedPeriod& b) {
              return a.source_start_hour < b.source_start_hour;
            });

  // distribute any weight lost to empty clusters so the year still closes
  double total = 0.0;
  for (const auto& p : tl.periods) total += p.weight;
  const double want = kHoursPerYear / H;
  if (std::abs(total - want) > 1e-12 && total > 0.0) {
    const double fix = want / total;
    for (auto& p : tl.periods) p.weight *= fix;
  }
  return tl;
}

ReducedTimeline full_timeline(const SystemSpec& spec, int hours_per_period) {
  TimelineOptions opt;
  opt.hours_per_period = hours_per_period;
  opt.n_periods = std::max(1, static_cast<int>(spec.n_hours()) / hours_per_period);
  opt.include_extremes = false;
  return build_timeline(spec, opt);
}

std::string timeline_to_json(const ReducedTimeline& tl) {
  nlohmann::json j;
  j["hours_per_period"] = tl.hours_per_period;
  j["periods"] = nlohmann::json::array();
  for (const auto& p : tl.periods) {
    j["periods"].push_back({{"source_start_hour", p.source_start_hour},
                            {"weight", p.weight},
                            {"cluster_size", p.cluster_size},
                            {"is_extreme", p.is_extreme},
                            {"extreme_tag", p.extreme_tag}});
  }
  j["diagnostics"] = {{"inertia", tl.diagnostics.inertia},
                      {"inertia_by_iteration", tl.diagnostics.inertia_by_iteration},
                      {"candidate_periods", tl.diagnostics.candidate_periods},
                      {"clustered_periods", tl.diagnostics.clustered_periods},
                      {"restarts", tl.diagnostics.restarts}};
  return j.dump(2);
}

ReducedTimeline timeline_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ReducedTimeline tl;
  tl.hours_per_period = j.at("hours_per_period").get<int>();
  for (const auto& pj : j.at("periods")) {
    ReducedPeriod p;
    p.source_start_hour = pj.at("source_start_hour").get<int>();
    p.weight = pj.at("weight").get<double>();
    p.cluster_size = pj.at("cluster_size").get<int>();
    p.is_extreme = pj.at("is_extreme").get<bool>();
    p.extreme_tag = pj.at("extreme_tag").get<std::string>();
    tl.periods.push_back(p);
  }
  if (j.contains("diagnostics")) {
    const auto& d = j["diagnostics"];
    tl.diagnostics.inertia = d.value("inertia", 0.0);
    tl.diagnostics.inertia_by_iteration =
        d.value("inertia_by_iteration", std::vector<double>{});
    tl.diagnostics.candidate_periods = d.value("candidate_periods", 0);
    tl.diagnostics.clustered_periods = d.value("clustered_periods", 0);
    tl.diagnostics.restarts = d.value("restarts", 0);
  }
  return tl;
}

}  // namespace eh2
