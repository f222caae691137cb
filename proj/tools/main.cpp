#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "eh2/config.hpp"
#include "eh2/costs.hpp"
#include "eh2/mps.hpp"
#include "eh2/scenario.hpp"
#include "eh2/timeline.hpp"
#include "eh2/units.hpp"
#include "eh2/validate.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace eh2;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;  // spec invariants or timeline infeasible
constexpr int kExitUsage = 2;
constexpr int kExitFile = 3;    // unreadable or unparseable inputs
constexpr int kExitSolver = 4;  // at least one scenario not optimal

struct CommonOpts {
  std::string config_path;
  uint64_t seed = 0;
  bool seed_set = false;
  std::string storage_linkage;  // empty: keep config value
  int jobs = 1;
  bool export_mps = false;
  bool decoupled_comparison = false;
  std::string timeline_path;  // reuse a bundle instead of clustering again
};

struct Inputs {
  RunConfig rc;
  SystemSpec spec;
};

// Loads and fully checks config + dataset before anything is written.
int load_inputs(const CommonOpts& o, Inputs& in) {
  std::ifstream f(o.config_path);
  if (!f) {
    std::fprintf(stderr, "error: cannot open config %s\n", o.config_path.c_str());
    return kExitFile;
  }
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    std::fprintf(stderr, "error: config %s is empty\n", o.config_path.c_str());
    return kExitUsage;
  }
  try {
    in.rc = load_run_config(o.config_path);
  } catch (const std::exception& e) {
    const std::string what = e.what();
    std::fprintf(stderr, "error: %s\n", what.c_str());
    return what.find("unsupported schema_version") != std::string::npos ? kExitUsage
                                                                        : kExitFile;
  }
  if (in.rc.system_path.empty()) {
    std::fprintf(stderr, "error: config %s has no \"system\" entry\n", o.config_path.c_str());
    return kExitUsage;
  }
  try {
    in.spec = load_system(in.rc.system_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFile;
  }
  if (o.seed_set) in.rc.timeline.seed = o.seed;
  if (!o.storage_linkage.empty())
    in.rc.formulation.storage_linkage = o.storage_linkage == "cyclic_week"
                                            ? StorageLinkage::cyclic_week
                                            : StorageLinkage::linked_chronological;
  return kExitOk;
}

// validate_spec plus a dry run of the timeline math; returns all findings.
std::vector<Violation> check_all(const Inputs& in) {
  std::vector<Violation> v = validate_spec(in.spec);
  try {
    build_timeline(in.spec, in.rc.timeline);
  } catch (const std::exception& e) {
    v.push_back({"timeline.infeasible", e.what()});
  }
  return v;
}

int cmd_validate(const CommonOpts& o) {
  Inputs in;
  if (int rc = load_inputs(o, in); rc != kExitOk) return rc;
  const auto violations = check_all(in);
  if (violations.empty()) {
    std::printf("ok: %s valid (%d zones, %zu gen techs, %zu hours)\n", in.spec.name.c_str(),
                in.spec.n_zones(), in.spec.gen_techs.size(), in.spec.n_hours());
    return kExitOk;
  }
  std::printf("%s\n", format_violations(violations).c_str());
  return kExitViolations;
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-') c = '_';
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("write failed on " + path.string());
}

// Per-series annual mean and peak of the reduction vs the full hourly data.
std::string reduction_diagnostics_csv(const SystemSpec& spec, const ReducedTimeline& tl) {
  std::ostringstream os;
  os << "# " << "eh2csv v1" << "\n";
  os << "series,full_mean,reduced_mean,mean_rel_error,full_peak,reduced_peak,peak_rel_error\n";
  const int H = tl.hours_per_period;
  auto emit = [&](const std::string& name, const std::vector<double>& s) {
    double full_sum = 0.0, full_peak = 0.0;
    for (double v : s) {
      full_sum += v;
      full_peak = std::max(full_peak, v);
    }
    const double full_mean = full_sum / static_cast<double>(s.size());
    double red_sum = 0.0, red_peak = 0.0;
    for (const auto& p : tl.periods)
      for (int h = 0; h < H; ++h) {
        red_sum += p.weight * s[p.source_start_hour + h];
        red_peak = std::max(red_peak, s[p.source_start_hour + h]);
      }
    const double red_mean = red_sum / tl.total_weight_hours();
    const double denom_mean = std::max(std::abs(full_mean), 1e-12);
    const double denom_peak = std::max(std::abs(full_peak), 1e-12);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", name.c_str(),
                  full_mean, red_mean, std::abs(red_mean - full_mean) / denom_mean, full_peak,
                  red_peak, std::abs(red_peak - full_peak) / denom_peak);
    os << buf;
  };
  for (const auto& z : spec.zones) {
    emit("power_z" + std::to_string(z.id), z.demand_power);
    emit("h2_z" + std::to_string(z.id), z.demand_h2);
  }
  for (const auto& b : spec.vre_bins) emit(b.id, b.profile);
  return os.str();
}

int cmd_reduce(const CommonOpts& o) {
  Inputs in;
  if (int rc = load_inputs(o, in); rc != kExitOk) return rc;
  const auto violations = check_all(in);
  if (!violations.empty()) {
    std::printf("%s\n", format_violations(violations).c_str());
    return kExitViolations;
  }
  const ReducedTimeline tl = build_timeline(in.spec, in.rc.timeline);
  const fs::path out(in.rc.output_dir);
  fs::create_directories(out);
  write_text(out / "timeline.json", timeline_to_json(tl));
  write_text(out / "reduction_diagnostics.csv", reduction_diagnostics_csv(in.spec, tl));
  std::printf("wrote %s: %d periods x %dh, weights close to %.6g h, inertia %.6g\n",
              (out / "timeline.json").c_str(), tl.n_periods(), tl.hours_per_period,
              tl.total_weight_hours(), tl.diagnostics.inertia);
  return kExitOk;
}

void write_dual_series(const fs::path& path, const SystemSpec& spec, const ReducedTimeline& tl,
                       const LinearProgram& lp, const SolveResult& sol) {
  std::ostringstream os;
  os << "# " << "eh2csv v1" << "\n";
  os << "zone,week,hour,power_price_usd_per_mwh,h2_price_usd_per_tonne\n";
  // collect both balance duals per (zone,week,hour); rows exist for each
  const int Z = spec.n_zones();
  const int P = tl.n_periods();
  const int H = tl.hours_per_period;
  std::vector<double> pp(static_cast<std::size_t>(Z) * P * H, 0.0), hp(pp);
  for (int i = 0; i < lp.n_rows(); ++i) {
    const RowKind k = lp.row_kind(i);
    if (k != RowKind::power_balance && k != RowKind::h2_balance) continue;
    const Coord& c = lp.row_coord(i);
    const std::size_t at = (static_cast<std::size_t>(c.zone) * P + c.week) * H + c.hour;
    const double price = sol.row_duals[i] / tl.periods[c.week].weight;
    (k == RowKind::power_balance ? pp : hp)[at] = price;
  }
  char buf[160];
  for (int z = 0; z < Z; ++z)
    for (int p = 0; p < P; ++p)
      for (int h = 0; h < H; ++h) {
        const std::size_t at = (static_cast<std::size_t>(z) * P + p) * H + h;
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g\n", spec.zones[z].id, p, h, pp[at],
                      hp[at]);
        os << buf;
      }
  write_text(path, os.str());
}

int cmd_solve(const CommonOpts& o) {
  Inputs in;
  if (int rc = load_inputs(o, in); rc != kExitOk) return rc;
  const auto violations = check_all(in);
  if (!violations.empty()) {
    std::printf("%s\n", format_violations(violations).c_str());
    return kExitViolations;
  }

  ReducedTimeline tl;
  if (!o.timeline_path.empty()) {
    std::ifstream f(o.timeline_path);
    if (!f) {
      std::fprintf(stderr, "error: cannot open timeline %s\n", o.timeline_path.c_str());
      return kExitFile;
    }
    std::stringstream buf;
    buf << f.rdbuf();
    try {
      tl = timeline_from_json(buf.str());
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s: %s\n", o.timeline_path.c_str(), e.what());
      return kExitFile;
    }
  } else {
    tl = build_timeline(in.spec, in.rc.timeline);
  }

  std::vector<ScenarioSpec> grid = expand_scenarios(in.rc);
  if (!o.storage_linkage.empty())
    for (auto& sc : grid) sc.formulation.storage_linkage = in.rc.formulation.storage_linkage;

  std::vector<const ScenarioSpec*> unique;
  for (const auto& sc : grid) {
    bool dup = false;
    for (const auto* u : unique) dup = dup || same_coordinates(*u, sc);
    if (!dup) unique.push_back(&sc);
  }
  if (unique.size() < grid.size())
    std::fprintf(stderr, "warning: dropped %zu duplicate scenario coordinate(s)\n",
                 grid.size() - unique.size());

  const fs::path out(in.rc.output_dir);
  fs::create_directories(out / "duals");
  if (o.export_mps) fs::create_directories(out / "mps");

  const int n = static_cast<int>(unique.size());
  std::vector<ScenarioResult> results(n);
  std::vector<std::string> errors(n);
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        ScenarioArtifacts art;
        results[i] = run_scenario(in.spec, tl, *unique[i], in.rc.solver, &art);
        const std::string stem = sanitize(unique[i]->name);
        if (results[i].ok())
          write_dual_series(out / "duals" / (stem + ".csv"), in.spec, tl, art.lp, art.sol);
        if (o.export_mps) {
          write_mps(art.lp, (out / "mps" / (stem + ".mps")).string(), unique[i]->name);
          write_mps_sidecar(art.lp, (out / "mps" / (stem + ".names.csv")).string());
        }
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::max(1, std::min(o.jobs, n));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  write_text(out / "report.csv", results_to_csv(results));
  {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) arr.push_back(nlohmann::json::parse(result_to_json(r)));
    write_text(out / "results.json", arr.dump(2) + "\n");
  }
  {
    // wall-clock numbers live outside the deterministic report files
    nlohmann::json t;
    for (const auto& r : results) t[r.name] = r.solve_seconds;
    write_text(out / "timing.json", t.dump(2) + "\n");
  }

  if (o.decoupled_comparison) {
    std::ostringstream os;
    os << "# " << "eh2csv v1" << "\n";
    os << "scenario,coupled_cost,decoupled_cost,savings,savings_fraction,"
          "coupled_emissions,decoupled_emissions,emissions_delta,emissions_delta_fraction,"
          "vre_delta_fraction\n";
    for (const auto* sc : unique) {
      const CoupledComparison cmp = coupled_vs_decoupled(in.spec, tl, *sc, in.rc.solver);
      char buf[512];
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                    (sc->name.empty() ? std::string("base") : sc->name).c_str(),
                    cmp.coupled.objective, cmp.decoupled.objective, cmp.savings(),
                    cmp.savings_fraction(), cmp.coupled.emissions_tonnes,
                    cmp.decoupled.emissions_tonnes, cmp.emissions_delta(),
                    cmp.emissions_delta_fraction(), cmp.vre_delta_fraction());
      os << buf;
    }
    write_text(out / "decoupled_comparison.csv", os.str());
  }

  int failures = 0;
  for (int i = 0; i < n; ++i) {
    if (!errors[i].empty()) {
      std::fprintf(stderr, "error: scenario %s: %s\n", unique[i]->name.c_str(),
                   errors[i].c_str());
      failures++;
    } else if (!results[i].ok()) {
      std::fprintf(stderr, "warning: scenario %s ended %s\n", unique[i]->name.c_str(),
                   results[i].message.c_str());
      failures++;
    }
  }
  std::printf("solved %d/%d scenario(s), reports in %s\n", n - failures, n, out.c_str());
  return failures == 0 ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"capacity planning for coupled electricity and hydrogen systems"};
  app.require_subcommand(1);

  CommonOpts o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "run configuration JSON")->required();
    sub->add_option("--seed", o.seed, "override the clustering seed")
        ->each([&](const std::string&) { o.seed_set = true; });
  };

  CLI::App* validate = app.add_subcommand("validate", "check dataset and config invariants");
  add_common(validate);

  CLI::App* reduce = app.add_subcommand("reduce", "cluster the year into representative periods");
  add_common(reduce);

  CLI::App* solve = app.add_subcommand("solve", "run the scenario grid end to end");
  add_common(solve);
  solve->add_option("--jobs", o.jobs, "parallel scenario evaluations")
      ->check(CLI::PositiveNumber);
  solve->add_flag("--export-mps", o.export_mps, "write one MPS file per scenario");
  solve->add_flag("--decoupled-comparison", o.decoupled_comparison,
                  "also solve every scenario with coupling disabled and tabulate the deltas");
  solve->add_option("--storage-linkage", o.storage_linkage, "inventory linking across periods")
      ->check(CLI::IsMember({"cyclic_week", "linked_chronological"}));
  solve->add_option("--timeline", o.timeline_path, "reuse a timeline bundle from `reduce`");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message/help
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand(validate)) return cmd_validate(o);
    if (app.got_subcommand(reduce)) return cmd_reduce(o);
    return cmd_solve(o);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFile;
  }
}
