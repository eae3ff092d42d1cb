#include <doctest.h>

#include "oracles.hpp"
#include "uavplan/baselines.hpp"
#include "uavplan/netgraph.hpp"
#include "uavplan/plan.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/rng.hpp"
#include "uavplan/scenario.hpp"

using namespace uavplan;

namespace {

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

// three collinear candidates 5 km apart; users only at the ends, so the
// cover stage picks the endpoints and the middle one is needed as a relay
Scenario relay_scenario() {
  Scenario s;
  s.area_width_m = 12000;
  s.area_height_m = 2000;
  s.geometry_mode = GeometryMode::preset;
  s.geometry = {1000.0, 3000.0, 6000.0};
  s.nodes = {{0, 500.0, 1000.0, NodeKind::user},
             {1, 11500.0, 1000.0, NodeKind::user}};
  s.candidates = {
      {0, 1000.0, 1000.0, 1000.0},
      {1, 6000.0, 1000.0, 1000.0},
      {2, 11000.0, 1000.0, 1000.0},
  };
  s.rng_seed = 1;
  return s;
}

}  // namespace

TEST_CASE("adaptive greedy resolves the worked example in three picks") {
  const auto g = make_graph(6, 3, {{0, 1, 2}, {1, 2, 3, 4}, {3, 4, 5}},
                            {{0, 1}, {0, 2}, {1, 2}});
  const Plan p = greedy_cover(g, GreedyMode::adaptive);
  // the middle candidate has the largest covered set and is picked first,
  // then each endpoint is still needed for one leftover user
  CHECK(p.selected == std::vector<int>{0, 1, 2});
  CHECK(p.algorithm_tag == "greedy_no_backhaul");
  CHECK(verify_plan(g, p).all_pass());
}

TEST_CASE("static greedy skips zero-gain candidates") {
  // candidate 1 duplicates candidate 0's users and sorts right after it
  const auto g = make_graph(3, 3, {{0, 1}, {0, 1}, {2}}, {{0, 1}, {1, 2}});
  const Plan p = greedy_cover(g, GreedyMode::static_sorted);
  CHECK(p.selected == std::vector<int>{0, 2});
}

TEST_CASE("adaptive greedy never selects more than static greedy") {
  Rng seeds(71);
  for (int t = 0; t < 100; ++t) {
    const Scenario s =
        make_preset_scenario(30000, 30000, 60, seeds.next(), 15.0);
    const auto g = build_graph(s);
    const Plan a = greedy_cover(g, GreedyMode::adaptive);
    const Plan b = greedy_cover(g, GreedyMode::static_sorted);
    CHECK(a.selected.size() <= b.selected.size());
    CHECK(verify_plan(g, a).all_pass());
    CHECK(verify_plan(g, b).all_pass());
  }
}

TEST_CASE("euclidean MST has n-1 edges, is acyclic, and matches the oracle weight") {
  Rng seeds(72);
  for (int t = 0; t < 30; ++t) {
    const Scenario s =
        make_preset_scenario(40000, 40000, 50, seeds.next(), 15.0);
    const auto g = build_graph(s);
    const Plan base = greedy_cover(g);
    const auto tree = euclidean_mst(s, base.selected);
    const int n = static_cast<int>(base.selected.size());
    REQUIRE(static_cast<int>(tree.size()) == std::max(0, n - 1));

    oracle::UnionFind uf(static_cast<int>(s.candidates.size()));
    double total = 0;
    for (const auto& e : tree) {
      CHECK(uf.unite(e.a, e.b));  // no cycle
      total += e.weight;
    }
    // all candidates share the scenario altitude, so 3D and 2D MST agree
    std::vector<CandidateLocation> cand(s.candidates.size());
    for (const auto& c : s.candidates) cand[c.id] = c;
    std::vector<std::pair<double, double>> pts;
    for (int k : base.selected) pts.push_back({cand[k].x, cand[k].y});
    CHECK(total == doctest::Approx(oracle::mst_weight(pts)).epsilon(1e-9));
  }
}

TEST_CASE("backhaul greedy inserts the middle relay on the collinear instance") {
  const Scenario s = relay_scenario();
  const auto g = build_graph(s);
  const Plan cover_only = greedy_cover(g);
  CHECK(cover_only.selected == std::vector<int>{0, 2});
  CHECK(!cover_only.backhaul_connected);

  const Plan p = backhaul_greedy(g, s);
  CHECK(p.selected == std::vector<int>{0, 1, 2});
  CHECK(p.backhaul_connected);
  CHECK(verify_plan(g, p).all_pass());
}

TEST_CASE("backhaul greedy extends the cover and always verifies") {
  Rng seeds(73);
  for (int t = 0; t < 50; ++t) {
    const Scenario s =
        make_preset_scenario(35000, 35000, 70, seeds.next(), 15.0);
    const auto g = build_graph(s);
    const Plan base = greedy_cover(g, GreedyMode::static_sorted);
    const Plan p = backhaul_greedy(g, s);
    CHECK(p.backhaul_connected);
    CHECK(verify_plan(g, p).all_pass());
    for (int k : base.selected)
      CHECK(std::binary_search(p.selected.begin(), p.selected.end(), k));
    CHECK(p.selected.size() >= base.selected.size());
  }
}

TEST_CASE("backhaul greedy refuses split candidate components") {
  // two coverage islands with no backhaul link between them
  Scenario s = relay_scenario();
  s.geometry.backhaul_radius_m = 4000.0;  // 5 km hops no longer reachable
  const auto g = build_graph(s);
  CHECK_THROWS_AS(backhaul_greedy(g, s), Error);
  try {
    backhaul_greedy(g, s);
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::infeasible_backhaul);
  }
}

TEST_CASE("random deployment is seed-deterministic and verifiable") {
  const Scenario s = make_preset_scenario(30000, 30000, 40, 17, 15.0);
  const auto g = build_graph(s);
  const Plan a = random_deploy(g, 1234);
  const Plan b = random_deploy(g, 1234);
  const Plan c = random_deploy(g, 1235);
  CHECK(a.selected == b.selected);
  CHECK(a.backhaul_connected);
  CHECK(verify_plan(g, a).all_pass());
  CHECK(verify_plan(g, c).all_pass());
}

TEST_CASE("mean candidate counts order as pruned <= backhaul greedy <= random") {
  Rng seeds(74);
  double sum_prune = 0, sum_bg = 0, sum_rand = 0;
  const int trials = 40;
  for (int t = 0; t < trials; ++t) {
    const Scenario s =
        make_preset_scenario(40000, 40000, 80, seeds.next(), 15.0);
    const auto g = build_graph(s);
    sum_prune += static_cast<double>(prune(g).selected.size());
    sum_bg += static_cast<double>(backhaul_greedy(g, s).selected.size());
    sum_rand += static_cast<double>(random_deploy(g, seeds.next()).selected.size());
  }
  CHECK(sum_prune <= sum_bg + 1e-9);
  CHECK(sum_bg < sum_rand);
}
