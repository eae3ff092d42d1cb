#include <doctest.h>

#include <filesystem>

#include "uavplan/netgraph.hpp"
#include "uavplan/plan.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/rng.hpp"
#include "uavplan/scenario.hpp"

using namespace uavplan;

namespace {

// graph built directly from covered sets and backhaul edges
DeploymentGraph make_graph(int n_users, int n_candidates,
                           std::vector<std::vector<int>> covered,
                           std::vector<std::pair<int, int>> edges) {
  DeploymentGraph g;
  g.n_users = n_users;
  g.n_candidates = n_candidates;
  g.covered_sets = std::move(covered);
  g.backhaul_edges.assign(n_candidates, {});
  for (auto [a, b] : edges) {
    g.backhaul_edges[a].push_back(b);
    g.backhaul_edges[b].push_back(a);
  }
  for (auto& adj : g.backhaul_edges) std::sort(adj.begin(), adj.end());
  for (auto& u : g.covered_sets) std::sort(u.begin(), u.end());
  return g;
}

// the six-user / three-candidate worked instance
DeploymentGraph worked_example() {
  return make_graph(6, 3,
                    {{0, 1, 2}, {1, 2, 3, 4}, {3, 4, 5}},
                    {{0, 1}, {0, 2}, {1, 2}});
}

}  // namespace

TEST_CASE("zero ground users prunes to the empty plan") {
  const auto g = make_graph(0, 4, {{}, {}, {}, {}},
                            {{0, 1}, {1, 2}, {2, 3}});
  const Plan p = prune(g);
  CHECK(p.selected.empty());
  CHECK(p.fixed.empty());
  CHECK(p.assignment.empty());
  CHECK(verify_plan(g, p).all_pass());
}

TEST_CASE("single essential candidate is kept alone") {
  // user 0 covered only by candidate 2; all candidates pairwise connected
  const auto g = make_graph(1, 3, {{}, {}, {0}},
                            {{0, 1}, {0, 2}, {1, 2}});
  const Plan p = prune(g);
  CHECK(p.selected == std::vector<int>{2});
  CHECK(p.fixed == std::vector<int>{2});
  CHECK(p.assignment.at(0) == 2);
  CHECK(verify_plan(g, p).all_pass());
}

TEST_CASE("worked example: prune selects {k1, k3}") {
  const auto g = worked_example();
  const Plan p = prune(g);
  CHECK(p.selected == std::vector<int>{0, 2});
  CHECK(verify_plan(g, p).all_pass());
  // every user claimed by its fixer
  CHECK(p.assignment.size() == 6);
  CHECK(p.assignment.at(0) == 0);
  CHECK(p.assignment.at(5) == 2);
}

TEST_CASE("infeasible coverage reports the missing node ids") {
  const auto g = make_graph(3, 2, {{0}, {1}}, {{0, 1}});
  try {
    prune(g);
    FAIL("expected infeasible_coverage");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::infeasible_coverage);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("disconnected candidate graph is refused with component sizes") {
  const auto g = make_graph(2, 4, {{0}, {0}, {1}, {1}},
                            {{0, 1}, {2, 3}});
  try {
    prune(g);
    FAIL("expected infeasible_backhaul");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::infeasible_backhaul);
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
}

TEST_CASE("prune output is minimal under single removals") {
  Rng seeds(404);
  for (int t = 0; t < 20; ++t) {
    const Scenario s =
        make_preset_scenario(20000, 20000, 40, seeds.next(), 15.0);
    const auto g = build_graph(s);
    const Plan p = prune(g);
    REQUIRE(verify_plan(g, p).all_pass());
    for (int u : p.selected) {
      std::vector<int> without;
      for (int k : p.selected)
        if (k != u) without.push_back(k);
      const bool still_fine =
          coverage_complete(g, without) && is_connected(g, without);
      CHECK(!still_fine);
    }
  }
}

TEST_CASE("prune is deterministic") {
  const Scenario s = make_preset_scenario(30000, 30000, 80, 5, 15.0);
  const auto g = build_graph(s);
  const Plan a = prune(g);
  const Plan b = prune(g);
  CHECK(a.selected == b.selected);
  CHECK(a.fixed == b.fixed);
  CHECK(a.assignment == b.assignment);
  CHECK(a.backhaul_topology == b.backhaul_topology);
}

TEST_CASE("every selected candidate is fixed at termination") {
  const Scenario s = make_preset_scenario(25000, 25000, 60, 9, 15.0);
  const auto g = build_graph(s);
  const Plan p = prune(g);
  CHECK(p.selected == p.fixed);
}

TEST_CASE("verify_plan flags broken plans") {
  const auto g = worked_example();
  const Plan good = prune(g);
  REQUIRE(verify_plan(g, good).all_pass());

  Plan missing = good;
  missing.selected = {0};  // dropped candidate 2
  CHECK(!verify_plan(g, missing).all_pass());

  Plan bad_assign = good;
  bad_assign.assignment[5] = 0;  // candidate 0 does not cover user 5
  CHECK(!verify_plan(g, bad_assign).all_pass());

  Plan bad_topo = good;
  bad_topo.backhaul_topology = {{0, 1}};  // 1 not selected
  CHECK(!verify_plan(g, bad_topo).all_pass());
}

TEST_CASE("plan serialization round trip") {
  const auto g = worked_example();
  const Plan p = prune(g);
  const std::string path = "test_plan_roundtrip.json";
  save_plan(p, path);
  const Plan q = load_plan(path);
  CHECK(q.selected == p.selected);
  CHECK(q.fixed == p.fixed);
  CHECK(q.assignment == p.assignment);
  CHECK(q.backhaul_topology == p.backhaul_topology);
  CHECK(q.algorithm_tag == p.algorithm_tag);
  std::filesystem::remove(path);
}

TEST_CASE("pruning runtime grows polynomially with candidate count") {
  // smoke check, not a hard gate: quadrupling the candidate count at
  // fixed user count must not blow past the cubic trend by orders of
  // magnitude
  const Scenario small = make_preset_scenario(25000, 25000, 100, 2, 15.0);
  const Scenario large = make_preset_scenario(100000, 100000, 100, 2, 15.0);
  const auto gs = build_graph(small);
  const auto gl = build_graph(large);
  CHECK(gl.n_candidates >= 4 * gs.n_candidates);
  const Plan ps = prune(gs);
  const Plan pl = prune(gl);
  CHECK(verify_plan(gl, pl).all_pass());
  if (ps.runtime_seconds > 1e-4)
    CHECK(pl.runtime_seconds <= 200.0 * ps.runtime_seconds + 1.0);
}
