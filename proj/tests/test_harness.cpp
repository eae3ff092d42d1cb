#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "uavplan/harness.hpp"

using namespace uavplan;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SweepSpec small_spec() {
  SweepSpec spec;
  spec.variable = SweepVariable::n_users;
  spec.values = {20, 40};
  spec.fixed.area_width_m = 20000;
  spec.fixed.area_height_m = 20000;
  spec.algorithms = {"proposed", "greedy", "backhaul_greedy", "random"};
  spec.repetitions = 5;
  spec.base_seed = 11;
  return spec;
}

}  // namespace

TEST_CASE("trial with zero ground nodes yields the empty plan") {
  const Scenario s = make_preset_scenario(20000, 20000, 0, 1, 15.0, 1000.0, false);
  CHECK(run_trial(s, "proposed").selected.empty());
  CHECK(run_trial(s, "greedy").selected.empty());
}

TEST_CASE("trials are deterministic given the seed") {
  const Scenario s = make_preset_scenario(20000, 20000, 30, 2, 15.0);
  const Plan a = run_trial(s, "random", 99);
  const Plan b = run_trial(s, "random", 99);
  CHECK(a.selected == b.selected);
  CHECK(run_trial(s, "proposed").selected == run_trial(s, "proposed").selected);
}

TEST_CASE("unknown algorithm tag is rejected") {
  const Scenario s = make_preset_scenario(20000, 20000, 10, 3, 15.0);
  try {
    run_trial(s, "simulated_annealing");
    FAIL("expected invalid_argument");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::invalid_argument);
  }
}

TEST_CASE("sweep spec validation rejects bad inputs") {
  SweepSpec spec = small_spec();
  spec.repetitions = 0;
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = small_spec();
  spec.values.clear();
  CHECK_THROWS_AS(spec.validate(), Error);
  spec = small_spec();
  spec.algorithms = {"gradient_descent"};
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("sweep spec JSON round trip") {
  const SweepSpec spec = small_spec();
  const SweepSpec back = sweep_spec_from_json(sweep_spec_to_json(spec));
  CHECK(back.variable == spec.variable);
  CHECK(back.values == spec.values);
  CHECK(back.algorithms == spec.algorithms);
  CHECK(back.repetitions == spec.repetitions);
  CHECK(back.base_seed == spec.base_seed);
  CHECK(back.fixed.area_width_m == spec.fixed.area_width_m);
  CHECK(back.fixed.n_users == spec.fixed.n_users);
}

TEST_CASE("a one-repetition cell reproduces the standalone trial") {
  SweepSpec spec = small_spec();
  spec.values = {25};
  spec.repetitions = 1;
  spec.algorithms = {"proposed", "greedy"};
  const SweepResult r = run_sweep(spec);

  const std::uint64_t seed = derive_seed(spec.base_seed, 25.0, 0);
  const Scenario s = cell_scenario(spec, 25.0, seed);
  const Plan p = run_trial(s, "proposed");
  const Plan gplan = run_trial(s, "greedy");
  CHECK(r.cell(25, "proposed").mean_uavs ==
        static_cast<double>(p.selected.size()));
  CHECK(r.cell(25, "greedy").mean_uavs ==
        static_cast<double>(gplan.selected.size()));
  CHECK(r.cell(25, "proposed").samples == 1);
  CHECK(r.cell(25, "proposed").std_uavs == 0.0);
}

TEST_CASE("multi-worker sweeps match the single-threaded result") {
  const SweepSpec spec = small_spec();
  const SweepResult a = run_sweep(spec, 1);
  const SweepResult b = run_sweep(spec, 4);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].mean_uavs == b.cells[i].mean_uavs);
    CHECK(a.cells[i].std_uavs == b.cells[i].std_uavs);
    CHECK(a.cells[i].min_uavs == b.cells[i].min_uavs);
    CHECK(a.cells[i].max_uavs == b.cells[i].max_uavs);
    CHECK(a.cells[i].samples == b.cells[i].samples);
  }
}

TEST_CASE("greedy cover counts do not depend on the backhaul threshold") {
  // same base seed => identical user layouts per swept value, and the
  // cover-only greedy ignores the backhaul radius entirely
  std::vector<double> means;
  for (double snr : {10.0, 15.0, 20.0}) {
    SweepSpec spec = small_spec();
    spec.algorithms = {"greedy"};
    spec.fixed.backhaul_snr_min_db = snr;
    const SweepResult r = run_sweep(spec);
    means.push_back(r.cell(20, "greedy").mean_uavs +
                    1000.0 * r.cell(40, "greedy").mean_uavs);
  }
  CHECK(means[0] == means[1]);
  CHECK(means[1] == means[2]);
}

TEST_CASE("paired means order as proposed <= backhaul greedy < random") {
  const SweepResult r = run_sweep(small_spec());
  double sum_p = 0, sum_bg = 0, sum_rand = 0;
  for (double v : {20.0, 40.0}) {
    CHECK(r.cell(v, "proposed").mean_uavs <=
          r.cell(v, "backhaul_greedy").mean_uavs + 1.0);
    sum_p += r.cell(v, "proposed").mean_uavs;
    sum_bg += r.cell(v, "backhaul_greedy").mean_uavs;
    sum_rand += r.cell(v, "random").mean_uavs;
    CHECK(r.cell(v, "proposed").coverage_rate == 1.0);
    CHECK(r.cell(v, "proposed").connectivity_rate == 1.0);
    CHECK(r.cell(v, "backhaul_greedy").connectivity_rate == 1.0);
    CHECK(r.cell(v, "random").connectivity_rate == 1.0);
  }
  CHECK(sum_p <= sum_bg + 1e-9);
  CHECK(sum_bg < sum_rand);
}

TEST_CASE("exact runs are skipped with a recorded reason on large cells") {
  SweepSpec spec = small_spec();
  spec.algorithms = {"proposed", "exact"};
  spec.values = {15};
  spec.repetitions = 3;
  spec.exact_limit = 10;  // the 20 km preset grid has far more candidates
  const SweepResult r = run_sweep(spec);
  const auto& exact_cell = r.cell(15, "exact");
  CHECK(exact_cell.samples == 0);
  REQUIRE(!exact_cell.errors.empty());
  CHECK(exact_cell.errors.front().find("exceed limit") != std::string::npos);
  // the proposed algorithm still produced results for every repetition
  CHECK(r.cell(15, "proposed").samples == 3);
}

TEST_CASE("emitted artifacts are complete and byte-identical across runs") {
  namespace fs = std::filesystem;
  const SweepSpec spec = small_spec();
  const SweepResult r = run_sweep(spec, 2);
  const std::string dir_a = "harness_out_a", dir_b = "harness_out_b";
  emit_results(r, dir_a);
  emit_results(run_sweep(spec, 3), dir_b);

  const std::string csv = slurp(dir_a + "/sweep.csv");
  // header + one row per (value, algorithm)
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 1 + 2 * 4);
  CHECK(csv.rfind("n_users,algorithm,mean,std,min,max,runtime,"
                  "coverage_rate,connectivity_rate",
                  0) == 0);

  // plot data: header plus sorted x rows with one column per algorithm
  std::istringstream dat(slurp(dir_a + "/plot_n_users.dat"));
  std::string line;
  std::getline(dat, line);
  CHECK(line == "# n_users proposed greedy backhaul_greedy random");
  double prev = -1;
  while (std::getline(dat, line)) {
    std::istringstream row(line);
    double x;
    REQUIRE((row >> x));
    CHECK(x > prev);
    prev = x;
    int cols = 0;
    double y;
    while (row >> y) ++cols;
    CHECK(cols == 4);
  }

  const std::string manifest = slurp(dir_a + "/manifest.json");
  CHECK(manifest.find("\"toolkit_version\"") != std::string::npos);
  CHECK(manifest.find("\"cell_seeds\"") != std::string::npos);

  // reproducibility: everything except runtimes must match; compare the
  // deterministic artifacts byte for byte
  CHECK(slurp(dir_a + "/manifest.json") == slurp(dir_b + "/manifest.json"));
  CHECK(slurp(dir_a + "/plot_n_users.dat") == slurp(dir_b + "/plot_n_users.dat"));
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}
