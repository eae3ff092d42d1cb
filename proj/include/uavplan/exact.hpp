#pragma once

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "uavplan/error.hpp"
#include "uavplan/netgraph.hpp"
#include "uavplan/plan.hpp"
#include "uavplan/planner.hpp"

namespace uavplan {

inline constexpr int kDefaultExactLimit = 22;
inline constexpr int kSubtourCandidateCap = 15;

enum class ConnectivityForm { flow, subtour };

namespace detail {

// fixed-width bitset over ground users
struct UserMask {
  std::vector<std::uint64_t> bits;

  explicit UserMask(int n_users = 0)
      : bits(static_cast<std::size_t>((n_users + 63) / 64), 0) {}

  void set(int i) { bits[i >> 6] |= 1ULL << (i & 63); }
  void operator|=(const UserMask& o) {
    for (std::size_t w = 0; w < bits.size(); ++w) bits[w] |= o.bits[w];
  }
  bool covers(const UserMask& full) const {
    for (std::size_t w = 0; w < bits.size(); ++w)
      if ((bits[w] & full.bits[w]) != full.bits[w]) return false;
    return true;
  }
};

struct ExactSearch {
  const DeploymentGraph& g;
  std::vector<UserMask> cover;   // per candidate
  std::vector<UserMask> suffix;  // union of cover[k..K-1]
  UserMask all_users;
  int target = 0;
  std::vector<int> chosen;
  std::vector<int> result;

  explicit ExactSearch(const DeploymentGraph& graph) : g(graph), all_users(g.n_users) {
    cover.reserve(g.n_candidates);
    for (int k = 0; k < g.n_candidates; ++k) {
      UserMask m(g.n_users);
      for (int i : g.covered_sets[k]) m.set(i);
      cover.push_back(m);
    }
    for (int i = 0; i < g.n_users; ++i) all_users.set(i);
    suffix.assign(g.n_candidates + 1, UserMask(g.n_users));
    for (int k = g.n_candidates - 1; k >= 0; --k) {
      suffix[k] = suffix[k + 1];
      suffix[k] |= cover[k];
    }
  }

  // lexicographic descent; first full-coverage connected subset found at
  // the current cardinality is the lexicographically smallest optimum
  bool descend(int start, const UserMask& covered) {
    const int depth = static_cast<int>(chosen.size());
    if (depth == target) {
      if (!covered.covers(all_users)) return false;
      if (!is_connected(g, chosen)) return false;
      result = chosen;
      return true;
    }
    UserMask reachable = covered;
    reachable |= suffix[start];
    if (!reachable.covers(all_users)) return false;
    const int slots = target - depth;
    for (int k = start; k + slots <= g.n_candidates; ++k) {
      chosen.push_back(k);
      UserMask next = covered;
      next |= cover[k];
      if (descend(k + 1, next)) return true;
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace detail

// Smallest candidate subset that covers every ground node and induces a
// connected backhaul subgraph, by cardinality-ascending enumeration.
// Returns the lexicographically smallest optimal subset.
inline Plan solve_exact(const DeploymentGraph& g, int limit = kDefaultExactLimit) {
  const auto t0 = std::chrono::steady_clock::now();
  if (g.n_candidates > limit)
    throw Error(ErrorCategory::instance_too_large,
                "solve_exact: " + std::to_string(g.n_candidates) +
                    " candidates exceed limit " + std::to_string(limit));
  detail::require_feasible_coverage(g);

  Plan plan;
  plan.algorithm_tag = "exact";
  if (g.n_users == 0) {
    plan.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return plan;
  }

  std::size_t max_cover = 1;
  for (const auto& u : g.covered_sets) max_cover = std::max(max_cover, u.size());
  const int lower =
      std::max(1, static_cast<int>((g.n_users + max_cover - 1) / max_cover));

  detail::ExactSearch search(g);
  for (int m = lower; m <= g.n_candidates; ++m) {
    search.target = m;
    search.chosen.clear();
    if (search.descend(0, detail::UserMask(g.n_users))) {
      plan.selected = search.result;
      break;
    }
  }
  if (plan.selected.empty())
    throw Error(ErrorCategory::infeasible_backhaul,
                "solve_exact: no covering connected subset exists");

  std::vector<char> assigned(g.n_users, 0);
  for (int k : plan.selected)
    for (int i : g.covered_sets[k])
      if (!assigned[i]) {
        assigned[i] = 1;
        plan.assignment[i] = k;
      }
  plan.backhaul_topology = spanning_topology(g, plan.selected);
  plan.backhaul_connected = is_connected(g, plan.selected);
  plan.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return plan;
}

// Write the deployment ILP in CPLEX LP text format. Access SNR gating is
// pre-resolved into the b-variable index set (a b_i_j exists only when
// user i lies in U_j). Connectivity is encoded either as subset
// cycle-elimination constraints over the undirected u variables (subtour,
// exponential, capped) or as a polynomial single-commodity flow with a
// selected root.
inline std::string export_ilp(const DeploymentGraph& g,
                              ConnectivityForm form = ConnectivityForm::flow) {
  if (form == ConnectivityForm::subtour && g.n_candidates > kSubtourCandidateCap)
    throw Error(ErrorCategory::instance_too_large,
                "export_ilp: subtour form limited to " +
                    std::to_string(kSubtourCandidateCap) + " candidates");
  const int K = g.n_candidates;
  std::vector<std::pair<int, int>> edges;  // undirected backhaul edges, j < k
  for (int j = 0; j < K; ++j)
    for (int k : g.backhaul_edges[j])
      if (j < k) edges.emplace_back(j, k);

  auto fv = [](int j) { return "f_" + std::to_string(j); };
  auto bv = [](int i, int j) {
    return "b_" + std::to_string(i) + "_" + std::to_string(j);
  };
  auto ev = [](const char* p, int j, int k) {
    return std::string(p) + "_" + std::to_string(j) + "_" + std::to_string(k);
  };

  std::ostringstream out;
  out << "\\ UAV deployment model: minimum connected covering placement\n";
  out << "\\ connectivity form: "
      << (form == ConnectivityForm::flow ? "flow" : "subtour") << "\n";
  out << "Minimize\n obj:";
  if (K == 0) out << " 0 f_none";
  for (int j = 0; j < K; ++j) out << (j ? " + " : " ") << fv(j);
  out << "\nSubject To\n";

  // each ground node covered by at least one selected candidate
  std::vector<std::vector<int>> coverers(g.n_users);
  for (int j = 0; j < K; ++j)
    for (int i : g.covered_sets[j]) coverers[i].push_back(j);
  for (int i = 0; i < g.n_users; ++i) {
    out << " cover_" << i << ":";
    for (std::size_t t = 0; t < coverers[i].size(); ++t)
      out << (t ? " + " : " ") << bv(i, coverers[i][t]);
    if (coverers[i].empty()) out << " 0 " << fv(0);
    out << " >= 1\n";
  }
  // association only with deployed candidates
  for (int i = 0; i < g.n_users; ++i)
    for (int j : coverers[i])
      out << " assoc_" << i << "_" << j << ": " << bv(i, j) << " - " << fv(j)
          << " <= 0\n";
  // backhaul link existence needs both endpoints deployed
  for (const auto& [j, k] : edges) {
    out << " zlink_a_" << j << "_" << k << ": " << ev("z", j, k) << " - " << fv(j)
        << " <= 0\n";
    out << " zlink_b_" << j << "_" << k << ": " << ev("z", j, k) << " - " << fv(k)
        << " <= 0\n";
  }
  // every deployed candidate keeps at least one backhaul link
  for (int j = 0; j < K; ++j) {
    out << " degree_" << j << ":";
    bool any = false;
    for (const auto& [a, b] : edges)
      if (a == j || b == j) {
        out << (any ? " + " : " ") << ev("z", a, b);
        any = true;
      }
    if (!any) out << " 0 " << fv(j);
    out << " - " << fv(j) << " >= 0\n";
  }
  // selected topology edges are a subset of existing links
  for (const auto& [j, k] : edges)
    out << " tree_link_" << j << "_" << k << ": " << ev("u", j, k) << " - "
        << ev("z", j, k) << " <= 0\n";
  // at least n-1 topology edges among n deployed candidates
  out << " tree_count:";
  for (std::size_t t = 0; t < edges.size(); ++t)
    out << (t ? " + " : " ") << ev("u", edges[t].first, edges[t].second);
  if (edges.empty()) out << " 0 " << (K ? fv(0) : "f_none");
  for (int j = 0; j < K; ++j) out << " - " << fv(j);
  out << " >= -1\n";

  if (form == ConnectivityForm::subtour) {
    // no cycles within any candidate subset (|S| >= 2)
    for (std::uint32_t mask = 1; mask < (1u << K); ++mask) {
      if (std::popcount(mask) < 2) continue;
      std::vector<std::pair<int, int>> inside;
      for (const auto& [j, k] : edges)
        if ((mask >> j & 1) && (mask >> k & 1)) inside.emplace_back(j, k);
      if (inside.empty()) continue;  // vacuously satisfied
      out << " subtour_" << mask << ":";
      for (std::size_t t = 0; t < inside.size(); ++t)
        out << (t ? " + " : " ") << ev("u", inside[t].first, inside[t].second);
      out << " <= " << std::popcount(mask) - 1 << "\n";
    }
  } else {
    // single-commodity flow: one selected root sources n-1 units, every
    // other selected candidate sinks one unit; flow only on z-active arcs
    for (int j = 0; j < K; ++j)
      out << " root_sel_" << j << ": r_" << j << " - " << fv(j) << " <= 0\n";
    out << " root_count:";
    for (int j = 0; j < K; ++j) out << (j ? " + " : " ") << "r_" << j;
    if (K == 0) out << " 0 f_none";
    out << " <= 1\n";
    for (int j = 0; j < K; ++j) {
      out << " root_need_" << j << ":";
      for (int k = 0; k < K; ++k) out << (k ? " + " : " ") << "r_" << k;
      out << " - " << fv(j) << " >= 0\n";
    }
    // w_j linearizes (sum_p f_p) * r_j
    for (int j = 0; j < K; ++j) {
      out << " wcap_" << j << ": w_" << j << " - " << K << " r_" << j << " <= 0\n";
      out << " wsum_" << j << ": w_" << j;
      for (int p = 0; p < K; ++p) out << " - " << fv(p);
      out << " <= 0\n";
      out << " wlow_" << j << ": w_" << j;
      for (int p = 0; p < K; ++p) out << " - " << fv(p);
      out << " - " << K << " r_" << j << " >= -" << K << "\n";
    }
    // arc capacity and node balance: inflow - outflow = f_j - w_j
    for (const auto& [j, k] : edges) {
      out << " cap_" << j << "_" << k << ": " << ev("x", j, k) << " - "
          << (K > 1 ? K - 1 : 1) << " " << ev("z", j, k) << " <= 0\n";
      out << " cap_" << k << "_" << j << ": " << ev("x", k, j) << " - "
          << (K > 1 ? K - 1 : 1) << " " << ev("z", j, k) << " <= 0\n";
    }
    for (int j = 0; j < K; ++j) {
      out << " balance_" << j << ":";
      bool any = false;
      for (const auto& [a, b] : edges) {
        if (a == j || b == j) {
          const int other = a == j ? b : a;
          out << (any ? " + " : " ") << ev("x", other, j) << " - "
              << ev("x", j, other);
          any = true;
        }
      }
      if (!any) out << " 0 " << fv(j);
      out << " - " << fv(j) << " + w_" << j << " = 0\n";
    }
  }

  out << "Bounds\n";
  if (form == ConnectivityForm::flow) {
    for (int j = 0; j < K; ++j) out << " 0 <= w_" << j << " <= " << K << "\n";
    for (const auto& [j, k] : edges) {
      out << " 0 <= " << ev("x", j, k) << " <= " << (K > 1 ? K - 1 : 1) << "\n";
      out << " 0 <= " << ev("x", k, j) << " <= " << (K > 1 ? K - 1 : 1) << "\n";
    }
  }
  out << "Binary\n";
  for (int j = 0; j < K; ++j) out << " " << fv(j) << "\n";
  for (int i = 0; i < g.n_users; ++i)
    for (int j : coverers[i]) out << " " << bv(i, j) << "\n";
  for (const auto& [j, k] : edges) out << " " << ev("z", j, k) << "\n";
  for (const auto& [j, k] : edges) out << " " << ev("u", j, k) << "\n";
  if (form == ConnectivityForm::flow)
    for (int j = 0; j < K; ++j) out << " r_" << j << "\n";
  out << "End\n";
  return out.str();
}

}  // namespace uavplan
