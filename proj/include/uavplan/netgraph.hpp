#pragma once

#include <algorithm>
#include <fstream>
#include <queue>
#include <string>
#include <vector>

#include "uavplan/error.hpp"
#include "uavplan/scenario.hpp"

namespace uavplan {

// Deployment graph of the initialization step: bipartite access edges
// between candidates and ground nodes, backhaul edges among candidates,
// and the per-candidate covered set U_k. Immutable after build.
struct DeploymentGraph {
  // covered_sets[k] doubles as the access adjacency of candidate k; the
  // two views of E are the same container.
  std::vector<std::vector<int>> covered_sets;    // candidate -> sorted ground ids
  std::vector<std::vector<int>> backhaul_edges;  // candidate -> sorted candidate ids
  int n_users = 0;
  int n_candidates = 0;

  const std::vector<int>& covered(int k) const { return covered_sets[k]; }
  int backhaul_degree(int k) const {
    return static_cast<int>(backhaul_edges[k].size());
  }
};

// Squared-distance comparisons against R^2 / R'^2; boundary ties count as
// connected.
inline DeploymentGraph build_graph(const Scenario& s) {
  DeploymentGraph g;
  g.n_users = static_cast<int>(s.nodes.size());
  g.n_candidates = static_cast<int>(s.candidates.size());
  // covered sets index ground nodes by id, so ids must be dense 0..n-1
  std::vector<char> seen_node(g.n_users, 0), seen_cand(g.n_candidates, 0);
  for (const auto& n : s.nodes) {
    if (n.id < 0 || n.id >= g.n_users || seen_node[n.id])
      throw Error(ErrorCategory::invalid_argument,
                  "build_graph: ground-node ids must be dense 0..n-1");
    seen_node[n.id] = 1;
  }
  for (const auto& c : s.candidates) {
    if (c.id < 0 || c.id >= g.n_candidates || seen_cand[c.id])
      throw Error(ErrorCategory::invalid_argument,
                  "build_graph: candidate ids must be dense 0..n-1");
    seen_cand[c.id] = 1;
  }
  g.covered_sets.assign(g.n_candidates, {});
  g.backhaul_edges.assign(g.n_candidates, {});
  const double r2 = s.geometry.ground_radius_m * s.geometry.ground_radius_m;
  const double rb2 = s.geometry.backhaul_radius_m * s.geometry.backhaul_radius_m;
  // index everything by id so the result is independent of list ordering
  std::vector<CandidateLocation> cand(g.n_candidates);
  for (const auto& c : s.candidates) cand[c.id] = c;
  for (int j = 0; j < g.n_candidates; ++j) {
    const auto& cj = cand[j];
    for (int k = j + 1; k < g.n_candidates; ++k) {
      const auto& ck = cand[k];
      const double dx = cj.x - ck.x, dy = cj.y - ck.y, dh = cj.h - ck.h;
      if (dx * dx + dy * dy + dh * dh <= rb2) {
        g.backhaul_edges[j].push_back(k);
        g.backhaul_edges[k].push_back(j);
      }
    }
    for (const auto& n : s.nodes) {
      const double dx = cj.x - n.x, dy = cj.y - n.y;
      if (dx * dx + dy * dy <= r2) g.covered_sets[j].push_back(n.id);
    }
  }
  for (auto& u : g.covered_sets) std::sort(u.begin(), u.end());
  return g;
}

// Induced backhaul subgraph connectivity. Empty and singleton subsets are
// connected by convention (so pruning can empty D on user-free scenarios).
inline bool is_connected(const DeploymentGraph& g, const std::vector<char>& in_subset,
                         int subset_size) {
  if (subset_size <= 1) return true;
  int start = -1;
  for (int k = 0; k < g.n_candidates; ++k)
    if (in_subset[k]) {
      start = k;
      break;
    }
  std::vector<char> seen(g.n_candidates, 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int j = q.front();
    q.pop();
    for (int k : g.backhaul_edges[j])
      if (in_subset[k] && !seen[k]) {
        seen[k] = 1;
        ++reached;
        q.push(k);
      }
  }
  return reached == subset_size;
}

inline bool is_connected(const DeploymentGraph& g, const std::vector<int>& subset) {
  std::vector<char> in(g.n_candidates, 0);
  int size = 0;
  for (int k : subset) {
    if (k < 0 || k >= g.n_candidates)
      throw Error(ErrorCategory::invalid_argument, "is_connected: bad candidate id");
    if (!in[k]) {
      in[k] = 1;
      ++size;
    }
  }
  return is_connected(g, in, size);
}

inline std::vector<int> uncovered(const DeploymentGraph& g,
                                  const std::vector<int>& subset) {
  std::vector<char> covered(g.n_users, 0);
  for (int k : subset) {
    if (k < 0 || k >= g.n_candidates)
      throw Error(ErrorCategory::invalid_argument, "uncovered: bad candidate id");
    for (int i : g.covered_sets[k]) covered[i] = 1;
  }
  std::vector<int> out;
  for (int i = 0; i < g.n_users; ++i)
    if (!covered[i]) out.push_back(i);
  return out;
}

inline bool coverage_complete(const DeploymentGraph& g,
                              const std::vector<int>& subset) {
  return uncovered(g, subset).empty();
}

// Component sizes of the full candidate graph (for infeasibility reports).
inline std::vector<int> component_sizes(const DeploymentGraph& g) {
  std::vector<int> comp(g.n_candidates, -1);
  std::vector<int> sizes;
  for (int s = 0; s < g.n_candidates; ++s) {
    if (comp[s] >= 0) continue;
    const int c = static_cast<int>(sizes.size());
    int size = 0;
    std::queue<int> q;
    q.push(s);
    comp[s] = c;
    while (!q.empty()) {
      const int j = q.front();
      q.pop();
      ++size;
      for (int k : g.backhaul_edges[j])
        if (comp[k] < 0) {
          comp[k] = c;
          q.push(k);
        }
    }
    sizes.push_back(size);
  }
  return sizes;
}

// Debug edge list: `A j i` access, `B j k` backhaul (j < k).
inline void dump_graph(const DeploymentGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::io_error, "cannot open for writing: " + path);
  for (int j = 0; j < g.n_candidates; ++j)
    for (int i : g.covered_sets[j]) out << "A " << j << " " << i << "\n";
  for (int j = 0; j < g.n_candidates; ++j)
    for (int k : g.backhaul_edges[j])
      if (j < k) out << "B " << j << " " << k << "\n";
}

}  // namespace uavplan
