#pragma once

#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "uavplan/error.hpp"
#include "uavplan/netgraph.hpp"

namespace uavplan {

inline constexpr int kPlanSchemaVersion = 1;

// A deployment: selected candidates, the subset proven indispensable,
// a per-user serving assignment and a backhaul topology witness.
struct Plan {
  std::vector<int> selected;                     // ordered candidate ids
  std::vector<int> fixed;                        // subset of selected
  std::map<int, int> assignment;                 // ground-node id -> candidate id
  std::vector<std::pair<int, int>> backhaul_topology;  // (j, k) with j < k
  std::string algorithm_tag;
  double runtime_seconds = 0;
  bool backhaul_connected = true;  // recorded, not enforced, for greedy_no_backhaul
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Recompute every Plan invariant from scratch. Greedy (no backhaul) plans
// get their connectivity recorded against the stored flag instead of
// being failed outright.
inline VerifyReport verify_plan(const DeploymentGraph& g, const Plan& plan) {
  VerifyReport rep;
  auto add = [&](std::string name, bool pass, std::string detail = "") {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  bool ids_ok = true;
  std::vector<char> in_sel(g.n_candidates, 0);
  for (int k : plan.selected) {
    if (k < 0 || k >= g.n_candidates || in_sel[k]) {
      ids_ok = false;
      break;
    }
    in_sel[k] = 1;
  }
  add("selected_ids_valid", ids_ok);
  if (!ids_ok) return rep;

  const auto missing = uncovered(g, plan.selected);
  add("coverage_complete", missing.empty(),
      missing.empty() ? "" : std::to_string(missing.size()) + " nodes uncovered");

  const bool connected = is_connected(g, plan.selected);
  if (plan.algorithm_tag == "greedy_no_backhaul")
    add("connectivity_recorded", connected == plan.backhaul_connected);
  else
    add("backhaul_connected", connected);

  bool fixed_ok = true;
  for (int k : plan.fixed)
    if (k < 0 || k >= g.n_candidates || !in_sel[k]) fixed_ok = false;
  add("fixed_subset_of_selected", fixed_ok);

  bool assign_ok = static_cast<int>(plan.assignment.size()) == g.n_users;
  for (const auto& [node, cand] : plan.assignment) {
    if (cand < 0 || cand >= g.n_candidates || !in_sel[cand]) {
      assign_ok = false;
      break;
    }
    const auto& u = g.covered_sets[cand];
    if (!std::binary_search(u.begin(), u.end(), node)) {
      assign_ok = false;
      break;
    }
  }
  add("assignment_valid", assign_ok);

  bool topo_ok = true;
  for (const auto& [j, k] : plan.backhaul_topology) {
    if (j < 0 || j >= g.n_candidates || k < 0 || k >= g.n_candidates ||
        !in_sel[j] || !in_sel[k]) {
      topo_ok = false;
      break;
    }
    const auto& adj = g.backhaul_edges[j];
    if (!std::binary_search(adj.begin(), adj.end(), k)) {
      topo_ok = false;
      break;
    }
  }
  add("topology_edges_valid", topo_ok);
  return rep;
}

// BFS spanning tree of the induced backhaul graph on `selected`; the
// witness stored in Plan.backhaul_topology. Empty when |selected| <= 1 or
// the subset is disconnected.
inline std::vector<std::pair<int, int>> spanning_topology(
    const DeploymentGraph& g, const std::vector<int>& selected) {
  std::vector<std::pair<int, int>> edges;
  if (selected.size() <= 1) return edges;
  if (!is_connected(g, selected)) return edges;
  std::vector<char> in(g.n_candidates, 0);
  for (int k : selected) in[k] = 1;
  std::vector<char> seen(g.n_candidates, 0);
  std::vector<int> stack{selected.front()};
  seen[selected.front()] = 1;
  while (!stack.empty()) {
    const int j = stack.back();
    stack.pop_back();
    for (int k : g.backhaul_edges[j])
      if (in[k] && !seen[k]) {
        seen[k] = 1;
        edges.emplace_back(std::min(j, k), std::max(j, k));
        stack.push_back(k);
      }
  }
  return edges;
}

inline nlohmann::ordered_json plan_to_json(const Plan& p) {
  nlohmann::ordered_json j;
  j["schema_version"] = kPlanSchemaVersion;
  j["algorithm_tag"] = p.algorithm_tag;
  j["selected"] = p.selected;
  j["fixed"] = p.fixed;
  auto assign = nlohmann::ordered_json::array();
  for (const auto& [node, cand] : p.assignment)
    assign.push_back({node, cand});
  j["assignment"] = std::move(assign);
  auto topo = nlohmann::ordered_json::array();
  for (const auto& [a, b] : p.backhaul_topology) topo.push_back({a, b});
  j["backhaul_topology"] = std::move(topo);
  j["backhaul_connected"] = p.backhaul_connected;
  j["runtime_seconds"] = p.runtime_seconds;
  return j;
}

inline Plan plan_from_json(const nlohmann::ordered_json& j) {
  if (!j.contains("schema_version") ||
      j["schema_version"].get<int>() != kPlanSchemaVersion)
    throw Error(ErrorCategory::schema_error,
                "plan: missing or unsupported schema_version");
  Plan p;
  p.algorithm_tag = j.at("algorithm_tag").get<std::string>();
  p.selected = j.at("selected").get<std::vector<int>>();
  p.fixed = j.at("fixed").get<std::vector<int>>();
  for (const auto& pair : j.at("assignment"))
    p.assignment[pair.at(0).get<int>()] = pair.at(1).get<int>();
  for (const auto& pair : j.at("backhaul_topology"))
    p.backhaul_topology.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  p.backhaul_connected = j.value("backhaul_connected", true);
  p.runtime_seconds = j.value("runtime_seconds", 0.0);
  return p;
}

inline void save_plan(const Plan& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCategory::io_error, "cannot open for writing: " + path);
  out << plan_to_json(p).dump(2) << "\n";
}

inline Plan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io_error, "cannot open: " + path);
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::schema_error,
                std::string("plan: malformed file: ") + e.what());
  }
  return plan_from_json(j);
}

}  // namespace uavplan
