#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "uavplan/error.hpp"
#include "uavplan/netgraph.hpp"
#include "uavplan/plan.hpp"
#include "uavplan/planner.hpp"
#include "uavplan/rng.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

enum class GreedyMode { adaptive, static_sorted };

struct EmstEdge {
  int a = 0, b = 0;
  double weight = 0;
};

namespace detail {

inline void finalize_plan(const DeploymentGraph& g, Plan& plan,
                          std::chrono::steady_clock::time_point t0) {
  std::sort(plan.selected.begin(), plan.selected.end());
  plan.backhaul_connected = is_connected(g, plan.selected);
  plan.backhaul_topology = spanning_topology(g, plan.selected);
  // first selected coverer serves each user
  std::vector<char> assigned(g.n_users, 0);
  for (int k : plan.selected)
    for (int i : g.covered_sets[k])
      if (!assigned[i]) {
        assigned[i] = 1;
        plan.assignment[i] = k;
      }
  plan.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

// Plain set-cover greedy, no backhaul guarantee. `adaptive` re-counts the
// uncovered users each pick; `static_sorted` follows the one-shot sort by
// |U_k| that the prose baseline describes, skipping zero-gain picks.
inline Plan greedy_cover(const DeploymentGraph& g,
                         GreedyMode mode = GreedyMode::adaptive) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require_feasible_coverage(g);
  Plan plan;
  plan.algorithm_tag = "greedy_no_backhaul";

  std::vector<char> covered(g.n_users, 0);
  int n_covered = 0;
  auto gain = [&](int k) {
    int gcount = 0;
    for (int i : g.covered_sets[k])
      if (!covered[i]) ++gcount;
    return gcount;
  };
  auto take = [&](int k) {
    plan.selected.push_back(k);
    for (int i : g.covered_sets[k])
      if (!covered[i]) {
        covered[i] = 1;
        ++n_covered;
      }
  };

  if (mode == GreedyMode::adaptive) {
    while (n_covered < g.n_users) {
      int best = -1, best_gain = 0;
      for (int k = 0; k < g.n_candidates; ++k) {
        const int gk = gain(k);
        if (gk > best_gain) {
          best = k;
          best_gain = gk;
        }
      }
      take(best);
    }
  } else {
    std::vector<int> order(g.n_candidates);
    for (int k = 0; k < g.n_candidates; ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return g.covered_sets[a].size() > g.covered_sets[b].size();
    });
    for (int k : order) {
      if (n_covered == g.n_users) break;
      if (gain(k) > 0) take(k);
    }
  }
  detail::finalize_plan(g, plan, t0);
  return plan;
}

// Prim MST over the selected candidates with Euclidean edge weights.
inline std::vector<EmstEdge> euclidean_mst(const Scenario& s,
                                           const std::vector<int>& selected) {
  std::vector<EmstEdge> tree;
  const int n = static_cast<int>(selected.size());
  if (n <= 1) return tree;
  std::vector<CandidateLocation> cand(s.candidates.size());
  for (const auto& c : s.candidates) cand[c.id] = c;
  auto dist = [&](int a, int b) {
    const auto &ca = cand[selected[a]], &cb = cand[selected[b]];
    return std::hypot(ca.x - cb.x, ca.y - cb.y, ca.h - cb.h);
  };
  std::vector<char> in_tree(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  best[0] = 0;
  for (int step = 0; step < n; ++step) {
    int v = -1;
    for (int i = 0; i < n; ++i)
      if (!in_tree[i] && (v < 0 || best[i] < best[v])) v = i;
    in_tree[v] = 1;
    if (parent[v] >= 0)
      tree.push_back({selected[parent[v]], selected[v], best[v]});
    for (int i = 0; i < n; ++i)
      if (!in_tree[i]) {
        const double d = dist(v, i);
        if (d < best[i]) {
          best[i] = d;
          parent[i] = v;
        }
      }
  }
  return tree;
}

namespace detail {

// Fewest-hop path in the candidate backhaul graph, ties broken toward the
// lexicographically smallest id sequence (BFS visiting neighbors in id
// order with smallest-parent preference).
inline std::vector<int> shortest_hop_path(const DeploymentGraph& g, int from,
                                          int to) {
  // BFS distances from the destination, then walk forward always taking
  // the smallest-id neighbor one step closer: the lexicographically
  // smallest among all fewest-hop id sequences.
  std::vector<int> dist(g.n_candidates, -1);
  std::queue<int> q;
  dist[to] = 0;
  q.push(to);
  while (!q.empty()) {
    const int j = q.front();
    q.pop();
    for (int k : g.backhaul_edges[j])
      if (dist[k] < 0) {
        dist[k] = dist[j] + 1;
        q.push(k);
      }
  }
  if (dist[from] < 0) return {};
  std::vector<int> path{from};
  int v = from;
  while (v != to) {
    int next = -1;
    for (int k : g.backhaul_edges[v])
      if (dist[k] == dist[v] - 1 && (next < 0 || k < next)) next = k;
    v = next;
    path.push_back(v);
  }
  return path;
}

}  // namespace detail

// Backhaul-aware greedy: greedy cover (the one-shot sorted variant by
// default, matching the prose baseline it extends), then connect its
// result along the Euclidean MST, realizing each tree edge as a
// fewest-hop relay chain through the candidate graph. Relays already
// picked are reused.
inline Plan backhaul_greedy(const DeploymentGraph& g, const Scenario& s,
                            GreedyMode mode = GreedyMode::static_sorted) {
  const auto t0 = std::chrono::steady_clock::now();
  Plan base = greedy_cover(g, mode);

  Plan plan;
  plan.algorithm_tag = "backhaul_greedy";
  std::vector<char> in_result(g.n_candidates, 0);
  for (int k : base.selected) in_result[k] = 1;
  plan.selected = base.selected;

  auto emst = euclidean_mst(s, base.selected);
  std::sort(emst.begin(), emst.end(), [](const EmstEdge& a, const EmstEdge& b) {
    return a.weight != b.weight ? a.weight < b.weight
                                : std::pair(a.a, a.b) < std::pair(b.a, b.b);
  });
  for (const auto& e : emst) {
    const auto path = detail::shortest_hop_path(g, e.a, e.b);
    if (path.empty())
      throw Error(ErrorCategory::infeasible_backhaul,
                  "backhaul_greedy: tree edge endpoints " + std::to_string(e.a) +
                      "," + std::to_string(e.b) +
                      " lie in different candidate-graph components");
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      const int relay = path[i];
      if (!in_result[relay]) {
        in_result[relay] = 1;
        plan.selected.push_back(relay);
      }
    }
  }
  detail::finalize_plan(g, plan, t0);
  return plan;
}

// Random baseline: draw distinct candidates uniformly until the set both
// covers every user and is backhaul-connected.
inline Plan random_deploy(const DeploymentGraph& g, std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require_feasible_coverage(g);
  detail::require_connected_candidates(g);
  Plan plan;
  plan.algorithm_tag = "random";

  Rng rng(seed);
  std::vector<int> pool(g.n_candidates);
  for (int k = 0; k < g.n_candidates; ++k) pool[k] = k;
  std::vector<char> in_sel(g.n_candidates, 0);
  std::vector<int> cover_count(g.n_users, 0);
  int n_covered = 0, n_selected = 0;

  // incremental connectivity via union-find over selected candidates
  std::vector<int> uf(g.n_candidates);
  for (int k = 0; k < g.n_candidates; ++k) uf[k] = k;
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  int components = 0;

  std::size_t remaining = pool.size();
  while (remaining > 0) {
    const std::size_t pick = static_cast<std::size_t>(rng.uniform_int(0, remaining - 1));
    const int k = pool[pick];
    pool[pick] = pool[--remaining];
    in_sel[k] = 1;
    ++n_selected;
    plan.selected.push_back(k);
    ++components;
    for (int j : g.backhaul_edges[k])
      if (in_sel[j]) {
        const int ra = find(k), rb = find(j);
        if (ra != rb) {
          uf[ra] = rb;
          --components;
        }
      }
    for (int i : g.covered_sets[k])
      if (cover_count[i]++ == 0) ++n_covered;
    if (n_covered == g.n_users && components <= 1) break;
  }
  detail::finalize_plan(g, plan, t0);
  return plan;
}

}  // namespace uavplan
