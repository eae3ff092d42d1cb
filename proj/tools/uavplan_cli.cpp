#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "uavplan/baselines.hpp"
#include "uavplan/channel.hpp"
#include "uavplan/exact.hpp"
#include "uavplan/harness.hpp"
#include "uavplan/netgraph.hpp"
#include "uavplan/plan.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/scenario.hpp"

namespace {

int exit_code_for(uavplan::ErrorCategory c) {
  switch (c) {
    case uavplan::ErrorCategory::invalid_argument: return 2;
    case uavplan::ErrorCategory::infeasible_coverage: return 3;
    case uavplan::ErrorCategory::infeasible_backhaul: return 4;
    case uavplan::ErrorCategory::instance_too_large: return 5;
    case uavplan::ErrorCategory::io_error: return 6;
    case uavplan::ErrorCategory::schema_error: return 7;
  }
  return 1;
}

void print_error(const uavplan::Error& e) {
  nlohmann::ordered_json j;
  j["error"] = {{"category", uavplan::to_string(e.category())},
                {"message", e.what()}};
  std::cerr << j.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace uavplan;
  CLI::App app{"UAV base-station deployment planning toolkit"};
  app.require_subcommand(1);

  // ---- radii ----
  auto* radii = app.add_subcommand(
      "radii", "Coverage radii and coverage-optimal altitude for channel params");
  ChannelParams cp;
  LinkThresholds th;
  double altitude = 1500.0, h_min = 100.0, h_max = 10000.0;
  bool optimize_h = false;
  radii->add_option("--fc", cp.carrier_frequency_hz, "Carrier frequency [Hz]");
  radii->add_option("--env-a", cp.env_a, "Environment constant a");
  radii->add_option("--env-b", cp.env_b, "Environment constant b [1/deg]");
  radii->add_option("--loss-los", cp.loss_los_db, "LoS system loss [dB]");
  radii->add_option("--loss-nlos", cp.loss_nlos_db, "NLoS system loss [dB]");
  radii->add_option("--tx-power", cp.tx_power_dbm, "Transmit power [dBm]");
  radii->add_option("--noise-psd", cp.noise_psd_dbm_hz, "Noise PSD [dBm/Hz]");
  radii->add_option("--bandwidth", cp.bandwidth_hz, "Bandwidth [Hz]");
  radii->add_option("--gamma0", th.access_snr_min_db, "Access SNR threshold [dB]");
  radii->add_option("--gamma0-backhaul", th.backhaul_snr_min_db,
                    "Backhaul SNR threshold [dB]");
  radii->add_option("--altitude", altitude, "UAV altitude [m]");
  radii->add_flag("--optimize-altitude", optimize_h,
                  "Search [--h-min, --h-max] for the coverage-optimal altitude");
  radii->add_option("--h-min", h_min, "Altitude search lower bound [m]");
  radii->add_option("--h-max", h_max, "Altitude search upper bound [m]");

  // ---- gen ----
  auto* gen = app.add_subcommand("gen", "Generate a clustered-user scenario file");
  double area_w = 50000, area_h = 50000, cluster_radius = 1000,
         gen_backhaul_snr = 15.0;
  int n_users = 200;
  std::uint64_t gen_seed = 1;
  bool no_bs = false;
  std::string gen_out = "scenario.json";
  gen->add_option("--width", area_w, "Area width [m]");
  gen->add_option("--height", area_h, "Area height [m]");
  gen->add_option("--users", n_users, "Number of ground users");
  gen->add_option("--backhaul-snr", gen_backhaul_snr, "Backhaul SNR threshold [dB]");
  gen->add_option("--cluster-radius", cluster_radius, "Cluster radius [m]");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_flag("--no-bs", no_bs, "Omit the central terrestrial BS node");
  gen->add_option("--out", gen_out, "Output scenario file");

  // ---- plan ----
  auto* plan_cmd = app.add_subcommand("plan", "Run one algorithm on a scenario");
  std::string plan_scenario, plan_alg = "proposed", plan_out = "plan.json",
              dump_graph_path;
  std::uint64_t plan_seed = 1;
  int plan_exact_limit = kDefaultExactLimit;
  plan_cmd->add_option("--scenario", plan_scenario, "Scenario file")->required();
  plan_cmd->add_option("--algorithm", plan_alg,
                       "proposed|greedy|greedy_adaptive|backhaul_greedy|random|exact");
  plan_cmd->add_option("--out", plan_out, "Output plan file");
  plan_cmd->add_option("--seed", plan_seed, "Seed (random algorithm)");
  plan_cmd->add_option("--exact-limit", plan_exact_limit,
                       "Candidate limit for the exact solver");
  plan_cmd->add_option("--dump-graph", dump_graph_path,
                       "Also write the deployment graph edge list");

  // ---- sweep ----
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter sweep");
  std::string sweep_spec_path, sweep_out = "sweep_out", sweep_format = "csv";
  int sweep_workers = 1, sweep_reps = 0;
  std::uint64_t sweep_seed = 0;
  sweep_cmd->add_option("--spec", sweep_spec_path, "Sweep spec file")->required();
  sweep_cmd->add_option("--out", sweep_out, "Output directory");
  sweep_cmd->add_option("--workers", sweep_workers, "Concurrent cells");
  sweep_cmd->add_option("--reps", sweep_reps, "Override repetitions");
  sweep_cmd->add_option("--seed", sweep_seed, "Override base seed");
  sweep_cmd->add_option("--format", sweep_format, "Output format (csv)");

  // ---- export-ilp ----
  auto* ilp_cmd = app.add_subcommand("export-ilp", "Export the deployment ILP");
  std::string ilp_scenario, ilp_out = "model.lp", ilp_form = "flow";
  ilp_cmd->add_option("--scenario", ilp_scenario, "Scenario file")->required();
  ilp_cmd->add_option("--form", ilp_form, "flow|subtour");
  ilp_cmd->add_option("--out", ilp_out, "Output LP file");

  // ---- verify ----
  auto* verify_cmd = app.add_subcommand("verify", "Verify a plan against a scenario");
  std::string verify_scenario, verify_plan_path;
  verify_cmd->add_option("--scenario", verify_scenario, "Scenario file")->required();
  verify_cmd->add_option("--plan", verify_plan_path, "Plan file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (radii->parsed()) {
      cp.validate();
      th.validate();
      CoverageGeometry g = optimize_h ? optimal_altitude(cp, th, h_min, h_max)
                                      : coverage_radii(cp, th, altitude);
      nlohmann::ordered_json j;
      j["altitude_m"] = g.altitude_m;
      j["ground_radius_m"] = g.ground_radius_m;
      j["backhaul_radius_m"] = g.backhaul_radius_m;
      std::cout << j.dump(2) << "\n";
    } else if (gen->parsed()) {
      const Scenario s = make_preset_scenario(area_w, area_h, n_users, gen_seed,
                                              gen_backhaul_snr, cluster_radius,
                                              !no_bs);
      save_scenario(s, gen_out);
      std::cout << "wrote " << gen_out << " (" << s.nodes.size() << " nodes, "
                << s.candidates.size() << " candidates)\n";
    } else if (plan_cmd->parsed()) {
      const Scenario s = load_scenario(plan_scenario);
      const auto g = build_graph(s);
      if (!dump_graph_path.empty()) dump_graph(g, dump_graph_path);
      const Plan p = run_trial(s, g, plan_alg, plan_seed, plan_exact_limit);
      save_plan(p, plan_out);
      std::cout << "algorithm=" << p.algorithm_tag << " uavs=" << p.selected.size()
                << " connected=" << (p.backhaul_connected ? "yes" : "no")
                << " runtime_s=" << p.runtime_seconds << "\n";
    } else if (sweep_cmd->parsed()) {
      if (sweep_format != "csv")
        throw Error(ErrorCategory::invalid_argument,
                    "sweep: unsupported format " + sweep_format);
      std::ifstream in(sweep_spec_path);
      if (!in) throw Error(ErrorCategory::io_error, "cannot open " + sweep_spec_path);
      nlohmann::ordered_json j;
      in >> j;
      SweepSpec spec = sweep_spec_from_json(j);
      if (sweep_cmd->count("--reps") > 0) spec.repetitions = sweep_reps;
      if (sweep_cmd->count("--seed") > 0) spec.base_seed = sweep_seed;
      const SweepResult r = run_sweep(spec, sweep_workers);
      emit_results(r, sweep_out);
      std::cout << "wrote " << sweep_out << "/sweep.csv (" << r.cells.size()
                << " cells)\n";
    } else if (ilp_cmd->parsed()) {
      const Scenario s = load_scenario(ilp_scenario);
      const auto g = build_graph(s);
      const auto form = [&] {
        if (ilp_form == "flow") return ConnectivityForm::flow;
        if (ilp_form == "subtour") return ConnectivityForm::subtour;
        throw Error(ErrorCategory::invalid_argument,
                    "export-ilp: unknown form " + ilp_form);
      }();
      std::ofstream out(ilp_out);
      if (!out) throw Error(ErrorCategory::io_error, "cannot write " + ilp_out);
      out << export_ilp(g, form);
      std::cout << "wrote " << ilp_out << "\n";
    } else if (verify_cmd->parsed()) {
      const Scenario s = load_scenario(verify_scenario);
      const auto g = build_graph(s);
      const Plan p = load_plan(verify_plan_path);
      const auto report = verify_plan(g, p);
      for (const auto& c : report.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
                  << (c.detail.empty() ? "" : " (" + c.detail + ")") << "\n";
      if (!report.all_pass()) return 1;
    }
  } catch (const Error& e) {
    print_error(e);
    return exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
