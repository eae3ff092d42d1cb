#pragma once

#include <chrono>
#include <vector>

#include "uavplan/error.hpp"
#include "uavplan/netgraph.hpp"
#include "uavplan/plan.hpp"

namespace uavplan {

namespace detail {

inline void require_feasible_coverage(const DeploymentGraph& g) {
  std::vector<char> coverable(g.n_users, 0);
  for (const auto& u : g.covered_sets)
    for (int i : u) coverable[i] = 1;
  std::vector<int> missing;
  for (int i = 0; i < g.n_users; ++i)
    if (!coverable[i]) missing.push_back(i);
  if (!missing.empty()) {
    std::string msg = "ground nodes in no coverage set:";
    for (int i : missing) msg += " " + std::to_string(i);
    throw Error(ErrorCategory::infeasible_coverage, msg);
  }
}

inline void require_connected_candidates(const DeploymentGraph& g) {
  const auto sizes = component_sizes(g);
  if (sizes.size() > 1) {
    std::string msg = "candidate graph disconnected, component sizes:";
    for (int s : sizes) msg += " " + std::to_string(s);
    throw Error(ErrorCategory::infeasible_backhaul, msg);
  }
}

}  // namespace detail

// Reverse-greedy pruning: start from all candidates, repeatedly pick the
// live candidate with the fewest unclaimed users (ties by backhaul degree
// within the current induced graph, then by lowest id) and remove it
// unless that breaks coverage or connectivity, in which case it is fixed
// and claims its remaining users.
inline Plan prune(const DeploymentGraph& g) {
  const auto t0 = std::chrono::steady_clock::now();
  detail::require_feasible_coverage(g);

  Plan plan;
  plan.algorithm_tag = "proposed";

  const int K = g.n_candidates;
  if (g.n_users == 0 || K == 0) {
    // vacuous coverage: every candidate is removable
    plan.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return plan;
  }
  if (component_sizes(g).size() > 1) {
    // the literal loop would fix everything and hand back a disconnected set
    detail::require_connected_candidates(g);
  }

  std::vector<char> alive(K, 1);   // membership in D
  std::vector<char> fixed(K, 0);   // membership in F
  std::vector<char> claimed(g.n_users, 0);
  std::vector<int> live_size(K);   // |U_k| over unclaimed users
  std::vector<int> degree(K);      // backhaul degree within induced graph on D
  std::vector<int> cover_count(g.n_users, 0);  // covering candidates among D
  std::vector<std::vector<int>> coverers(g.n_users);
  for (int k = 0; k < K; ++k) {
    live_size[k] = static_cast<int>(g.covered_sets[k].size());
    degree[k] = g.backhaul_degree(k);
    for (int i : g.covered_sets[k]) {
      ++cover_count[i];
      coverers[i].push_back(k);
    }
  }

  int alive_count = K;
  for (int iter = 0; iter < K; ++iter) {
    // argmin |U_k| over D \ F, then min induced degree, then lowest id
    int u = -1;
    for (int k = 0; k < K; ++k) {
      if (!alive[k] || fixed[k]) continue;
      if (u < 0 || live_size[k] < live_size[u] ||
          (live_size[k] == live_size[u] && degree[k] < degree[u]))
        u = k;
    }
    if (u < 0) break;  // D == F

    bool breaks_coverage = false;
    for (int i : g.covered_sets[u])
      if (cover_count[i] == 1) {
        breaks_coverage = true;
        break;
      }
    alive[u] = 0;
    const bool breaks_connectivity = !is_connected(g, alive, alive_count - 1);
    if (breaks_coverage || breaks_connectivity) {
      alive[u] = 1;
      fixed[u] = 1;
      for (int i : g.covered_sets[u]) {
        if (claimed[i]) continue;
        claimed[i] = 1;
        plan.assignment[i] = u;
        // claimed users stop counting toward any live set
        for (int k : coverers[i]) --live_size[k];
      }
    } else {
      --alive_count;
      for (int k : g.backhaul_edges[u])
        if (alive[k]) --degree[k];
      for (int i : g.covered_sets[u]) --cover_count[i];
    }
  }

  for (int k = 0; k < K; ++k)
    if (alive[k]) {
      plan.selected.push_back(k);
      if (fixed[k]) plan.fixed.push_back(k);
    }
  plan.backhaul_topology = spanning_topology(g, plan.selected);
  plan.backhaul_connected = is_connected(g, plan.selected);
  plan.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return plan;
}

}  // namespace uavplan
