#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "uavplan/baselines.hpp"
#include "uavplan/error.hpp"
#include "uavplan/exact.hpp"
#include "uavplan/netgraph.hpp"
#include "uavplan/plan.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/rng.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

inline constexpr const char* kToolkitVersion = "1.0.0";

enum class SweepVariable { n_users, area_side, backhaul_snr };

inline const char* to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::n_users: return "n_users";
    case SweepVariable::area_side: return "area_side";
    case SweepVariable::backhaul_snr: return "backhaul_snr";
  }
  return "unknown";
}

struct SweepTemplate {
  double area_width_m = 50000;
  double area_height_m = 50000;
  int n_users = 200;
  double backhaul_snr_min_db = 15.0;
  double cluster_radius_m = 1000.0;
  bool include_center_bs = true;
};

struct SweepSpec {
  SweepVariable variable = SweepVariable::n_users;
  std::vector<double> values;
  SweepTemplate fixed;
  std::vector<std::string> algorithms;
  int repetitions = 20;
  std::uint64_t base_seed = 1;
  int exact_limit = kDefaultExactLimit;

  void validate() const {
    if (repetitions < 1)
      throw Error(ErrorCategory::invalid_argument, "sweep: repetitions must be >= 1");
    if (values.empty())
      throw Error(ErrorCategory::invalid_argument, "sweep: values must be non-empty");
    for (const auto& a : algorithms)
      if (a != "proposed" && a != "greedy" && a != "greedy_adaptive" &&
          a != "backhaul_greedy" && a != "random" && a != "exact")
        throw Error(ErrorCategory::invalid_argument, "sweep: unknown algorithm " + a);
    if (algorithms.empty())
      throw Error(ErrorCategory::invalid_argument, "sweep: no algorithms given");
  }
};

struct SweepCell {
  double value = 0;
  std::string algorithm;
  int samples = 0;
  double mean_uavs = 0, std_uavs = 0;
  double min_uavs = 0, max_uavs = 0;
  double mean_runtime_s = 0;
  double coverage_rate = 0;
  double connectivity_rate = 0;
  std::vector<std::string> errors;  // per-rep skip/abort reasons
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;  // |values| x |algorithms|, value-major

  const SweepCell& cell(double value, const std::string& algorithm) const {
    for (const auto& c : cells)
      if (c.value == value && c.algorithm == algorithm) return c;
    throw Error(ErrorCategory::invalid_argument, "sweep: no such cell");
  }
};

inline Plan run_trial(const Scenario& s, const DeploymentGraph& g,
                      const std::string& algorithm_tag,
                      std::uint64_t seed = 0, int exact_limit = kDefaultExactLimit) {
  Plan plan;
  if (algorithm_tag == "proposed")
    plan = prune(g);
  else if (algorithm_tag == "greedy")
    plan = greedy_cover(g, GreedyMode::static_sorted);
  else if (algorithm_tag == "greedy_adaptive")
    plan = greedy_cover(g, GreedyMode::adaptive);
  else if (algorithm_tag == "backhaul_greedy")
    plan = backhaul_greedy(g, s);
  else if (algorithm_tag == "random")
    plan = random_deploy(g, seed);
  else if (algorithm_tag == "exact")
    plan = solve_exact(g, exact_limit);
  else
    throw Error(ErrorCategory::invalid_argument,
                "run_trial: unknown algorithm " + algorithm_tag);
  const auto report = verify_plan(g, plan);
  if (!report.all_pass()) {
    std::string msg = "run_trial: plan verification failed (" + algorithm_tag + "):";
    for (const auto& c : report.checks)
      if (!c.pass) msg += " " + c.name;
    throw Error(ErrorCategory::invalid_argument, msg);
  }
  return plan;
}

inline Plan run_trial(const Scenario& s, const std::string& algorithm_tag,
                      std::uint64_t seed = 0, int exact_limit = kDefaultExactLimit) {
  validate_scenario(s);
  const auto g = build_graph(s);
  return run_trial(s, g, algorithm_tag, seed, exact_limit);
}

// Scenario for one sweep cell. The swept variable overrides its template
// field; users are regenerated from the cell seed so that all algorithms
// in a cell see the identical layout.
inline Scenario cell_scenario(const SweepSpec& spec, double value,
                              std::uint64_t cell_seed) {
  const auto& t = spec.fixed;
  double w = t.area_width_m, h = t.area_height_m;
  int users = t.n_users;
  double snr = t.backhaul_snr_min_db;
  switch (spec.variable) {
    case SweepVariable::n_users: users = static_cast<int>(value); break;
    case SweepVariable::area_side: w = h = value; break;
    case SweepVariable::backhaul_snr: snr = value; break;
  }
  return make_preset_scenario(w, h, users, cell_seed, snr, t.cluster_radius_m,
                              t.include_center_bs);
}

inline SweepResult run_sweep(const SweepSpec& spec, int workers = 1) {
  spec.validate();
  struct RepOutcome {
    std::map<std::string, Plan> plans;
    std::string error;
  };
  const int n_values = static_cast<int>(spec.values.size());
  std::vector<std::vector<RepOutcome>> outcomes(
      static_cast<std::size_t>(n_values),
      std::vector<RepOutcome>(static_cast<std::size_t>(spec.repetitions)));

  std::atomic<int> next{0};
  const int total = n_values * spec.repetitions;
  auto work = [&] {
    for (int job = next++; job < total; job = next++) {
      const int vi = job / spec.repetitions;
      const int rep = job % spec.repetitions;
      const double value = spec.values[vi];
      const std::uint64_t seed =
          derive_seed(spec.base_seed, value, static_cast<std::uint64_t>(rep));
      auto& out = outcomes[vi][rep];
      try {
        const Scenario s = cell_scenario(spec, value, seed);
        const auto g = build_graph(s);
        for (const auto& alg : spec.algorithms) {
          if (alg == "exact" && g.n_candidates > spec.exact_limit) {
            out.error = "exact skipped: " + std::to_string(g.n_candidates) +
                        " candidates exceed limit " +
                        std::to_string(spec.exact_limit);
            continue;
          }
          out.plans[alg] = run_trial(s, g, alg, splitmix64(seed), spec.exact_limit);
        }
      } catch (const Error& e) {
        out.error = std::string(to_string(e.category())) + ": " + e.what();
        out.plans.clear();  // a failed rep never skews any algorithm's average
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  result.spec = spec;
  for (int vi = 0; vi < n_values; ++vi) {
    for (const auto& alg : spec.algorithms) {
      SweepCell cell;
      cell.value = spec.values[vi];
      cell.algorithm = alg;
      std::vector<double> counts, runtimes;
      int covered = 0, connected = 0;
      for (int rep = 0; rep < spec.repetitions; ++rep) {
        const auto& out = outcomes[vi][rep];
        if (!out.error.empty()) cell.errors.push_back(out.error);
        const auto it = out.plans.find(alg);
        if (it == out.plans.end()) continue;
        const auto& plan = it->second;
        counts.push_back(static_cast<double>(plan.selected.size()));
        runtimes.push_back(plan.runtime_seconds);
        ++covered;  // run_trial verified coverage
        if (plan.backhaul_connected) ++connected;
      }
      cell.samples = static_cast<int>(counts.size());
      if (cell.samples > 0) {
        double sum = 0, sq = 0;
        cell.min_uavs = counts.front();
        cell.max_uavs = counts.front();
        for (double c : counts) {
          sum += c;
          sq += c * c;
          cell.min_uavs = std::min(cell.min_uavs, c);
          cell.max_uavs = std::max(cell.max_uavs, c);
        }
        cell.mean_uavs = sum / cell.samples;
        const double var =
            std::max(0.0, sq / cell.samples - cell.mean_uavs * cell.mean_uavs);
        cell.std_uavs = std::sqrt(var);
        double rt = 0;
        for (double r : runtimes) rt += r;
        cell.mean_runtime_s = rt / cell.samples;
        cell.coverage_rate = static_cast<double>(covered) / cell.samples;
        cell.connectivity_rate = static_cast<double>(connected) / cell.samples;
      }
      result.cells.push_back(std::move(cell));
    }
  }
  return result;
}

inline nlohmann::ordered_json sweep_spec_to_json(const SweepSpec& s) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["variable"] = to_string(s.variable);
  j["values"] = s.values;
  j["fixed"] = {{"area_width_m", s.fixed.area_width_m},
                {"area_height_m", s.fixed.area_height_m},
                {"n_users", s.fixed.n_users},
                {"backhaul_snr_min_db", s.fixed.backhaul_snr_min_db},
                {"cluster_radius_m", s.fixed.cluster_radius_m},
                {"include_center_bs", s.fixed.include_center_bs}};
  j["algorithms"] = s.algorithms;
  j["repetitions"] = s.repetitions;
  j["base_seed"] = s.base_seed;
  j["exact_limit"] = s.exact_limit;
  return j;
}

inline SweepSpec sweep_spec_from_json(const nlohmann::ordered_json& j) {
  SweepSpec s;
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
    throw Error(ErrorCategory::schema_error, "sweep spec: bad schema_version");
  const std::string var = j.at("variable").get<std::string>();
  if (var == "n_users")
    s.variable = SweepVariable::n_users;
  else if (var == "area_side")
    s.variable = SweepVariable::area_side;
  else if (var == "backhaul_snr")
    s.variable = SweepVariable::backhaul_snr;
  else
    throw Error(ErrorCategory::schema_error, "sweep spec: unknown variable " + var);
  s.values = j.at("values").get<std::vector<double>>();
  if (j.contains("fixed")) {
    const auto& f = j["fixed"];
    s.fixed.area_width_m = f.value("area_width_m", s.fixed.area_width_m);
    s.fixed.area_height_m = f.value("area_height_m", s.fixed.area_height_m);
    s.fixed.n_users = f.value("n_users", s.fixed.n_users);
    s.fixed.backhaul_snr_min_db =
        f.value("backhaul_snr_min_db", s.fixed.backhaul_snr_min_db);
    s.fixed.cluster_radius_m = f.value("cluster_radius_m", s.fixed.cluster_radius_m);
    s.fixed.include_center_bs =
        f.value("include_center_bs", s.fixed.include_center_bs);
  }
  s.algorithms = j.at("algorithms").get<std::vector<std::string>>();
  s.repetitions = j.value("repetitions", 20);
  s.base_seed = j.value("base_seed", std::uint64_t{1});
  s.exact_limit = j.value("exact_limit", kDefaultExactLimit);
  s.validate();
  return s;
}

// CSV with one row per (value, algorithm), a plot-data file with one mean
// column per algorithm, and a manifest sufficient to reproduce the sweep.
inline void emit_results(const SweepResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCategory::io_error, "cannot create " + out_dir);

  const std::string var = to_string(r.spec.variable);
  {
    std::ofstream csv(out_dir + "/sweep.csv");
    if (!csv) throw Error(ErrorCategory::io_error, "cannot write sweep.csv");
    csv << var
        << ",algorithm,mean,std,min,max,runtime,coverage_rate,connectivity_rate\n";
    csv.precision(10);
    for (const auto& c : r.cells)
      csv << c.value << "," << c.algorithm << "," << c.mean_uavs << ","
          << c.std_uavs << "," << c.min_uavs << "," << c.max_uavs << ","
          << c.mean_runtime_s << "," << c.coverage_rate << ","
          << c.connectivity_rate << "\n";
  }
  {
    std::ofstream dat(out_dir + "/plot_" + var + ".dat");
    if (!dat) throw Error(ErrorCategory::io_error, "cannot write plot data");
    dat.precision(10);
    dat << "# " << var;
    for (const auto& a : r.spec.algorithms) dat << " " << a;
    dat << "\n";
    auto values = r.spec.values;
    std::sort(values.begin(), values.end());
    for (double v : values) {
      dat << v;
      for (const auto& a : r.spec.algorithms) dat << " " << r.cell(v, a).mean_uavs;
      dat << "\n";
    }
  }
  {
    nlohmann::ordered_json manifest;
    manifest["toolkit_version"] = kToolkitVersion;
    manifest["spec"] = sweep_spec_to_json(r.spec);
    auto seeds = nlohmann::ordered_json::array();
    for (double v : r.spec.values)
      for (int rep = 0; rep < r.spec.repetitions; ++rep)
        seeds.push_back(derive_seed(r.spec.base_seed, v, rep));
    manifest["cell_seeds"] = std::move(seeds);
    auto errors = nlohmann::ordered_json::array();
    for (const auto& c : r.cells)
      for (const auto& e : c.errors)
        errors.push_back({{"value", c.value}, {"algorithm", c.algorithm}, {"error", e}});
    manifest["errors"] = std::move(errors);
    std::ofstream mf(out_dir + "/manifest.json");
    if (!mf) throw Error(ErrorCategory::io_error, "cannot write manifest.json");
    mf << manifest.dump(2) << "\n";
  }
}

}  // namespace uavplan
