#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavplan/channel.hpp"
#include "uavplan/error.hpp"
#include "uavplan/rng.hpp"

namespace uavplan {

inline constexpr int kScenarioSchemaVersion = 1;

enum class NodeKind { user, terrestrial_bs };

struct GroundNode {
  int id = 0;
  double x = 0, y = 0;
  NodeKind kind = NodeKind::user;

  bool operator==(const GroundNode&) const = default;
};

struct CandidateLocation {
  int id = 0;
  double x = 0, y = 0, h = 0;

  bool operator==(const CandidateLocation&) const = default;
};

// How the geometry block relates to channel+thresholds. `derived` means
// both radii are recomputable from the channel model; `preset` carries a
// literature ground radius verbatim (the backhaul radius stays derived).
enum class GeometryMode { derived, preset };

struct Scenario {
  double area_width_m = 0;
  double area_height_m = 0;
  std::vector<GroundNode> nodes;
  std::vector<CandidateLocation> candidates;
  ChannelParams channel;
  LinkThresholds thresholds;
  CoverageGeometry geometry;
  GeometryMode geometry_mode = GeometryMode::derived;
  std::uint64_t rng_seed = 0;

  bool operator==(const Scenario&) const = default;
};

inline bool operator==(const ChannelParams& a, const ChannelParams& b) {
  return a.carrier_frequency_hz == b.carrier_frequency_hz && a.env_a == b.env_a &&
         a.env_b == b.env_b && a.loss_los_db == b.loss_los_db &&
         a.loss_nlos_db == b.loss_nlos_db && a.tx_power_dbm == b.tx_power_dbm &&
         a.noise_psd_dbm_hz == b.noise_psd_dbm_hz &&
         a.bandwidth_hz == b.bandwidth_hz && a.light_speed_m_s == b.light_speed_m_s;
}

inline bool operator==(const LinkThresholds& a, const LinkThresholds& b) {
  return a.access_snr_min_db == b.access_snr_min_db &&
         a.backhaul_snr_min_db == b.backhaul_snr_min_db;
}

inline bool operator==(const CoverageGeometry& a, const CoverageGeometry& b) {
  return a.altitude_m == b.altitude_m && a.ground_radius_m == b.ground_radius_m &&
         a.backhaul_radius_m == b.backhaul_radius_m;
}

// Square lattice of candidate locations with spacing R/sqrt(2) (cell
// diagonal = R), centered in the area so edge margins are symmetric.
inline std::vector<CandidateLocation> generate_grid(double area_width_m,
                                                    double area_height_m,
                                                    double ground_radius_m,
                                                    double altitude_m,
                                                    double spacing_override_m = 0) {
  if (!(area_width_m > 0) || !(area_height_m > 0) || !(ground_radius_m > 0))
    throw Error(ErrorCategory::invalid_argument,
                "generate_grid: area and radius must be positive");
  const double s = spacing_override_m > 0 ? spacing_override_m
                                          : ground_radius_m / std::sqrt(2.0);
  auto axis = [&](double extent) {
    const int n = static_cast<int>(std::floor(extent / s)) + 1;
    const double offset = (extent - (n - 1) * s) / 2.0;
    std::vector<double> coords(n);
    for (int i = 0; i < n; ++i) coords[i] = offset + i * s;
    return coords;
  };
  const auto xs = axis(area_width_m);
  const auto ys = axis(area_height_m);
  std::vector<CandidateLocation> out;
  out.reserve(xs.size() * ys.size());
  int id = 0;
  for (double y : ys)
    for (double x : xs) out.push_back({id++, x, y, altitude_m});
  return out;
}

// Clustered user layout: repeatedly draw a cluster size uniformly from
// [size_min, size_max] (capped by the remaining budget), a center uniform
// in the area, then that many users uniform in the disk around the
// center, clipped to the area.
inline std::vector<GroundNode> generate_clustered_users(
    double area_width_m, double area_height_m, int n_users, int size_min,
    int size_max, double cluster_radius_m, std::uint64_t seed) {
  if (n_users < 0 || !(cluster_radius_m > 0) || size_min < 1 || size_max < size_min)
    throw Error(ErrorCategory::invalid_argument,
                "generate_clustered_users: bad arguments");
  Rng rng(seed);
  std::vector<GroundNode> out;
  out.reserve(static_cast<std::size_t>(n_users));
  int id = 0;
  while (id < n_users) {
    const int size = std::min<int>(
        n_users - id,
        static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(size_min),
                                         static_cast<std::uint64_t>(size_max))));
    const double cx = rng.uniform(0.0, area_width_m);
    const double cy = rng.uniform(0.0, area_height_m);
    for (int i = 0; i < size; ++i) {
      const double r = cluster_radius_m * std::sqrt(rng.uniform());
      const double phi = rng.uniform(0.0, 2.0 * M_PI);
      const double x = std::clamp(cx + r * std::cos(phi), 0.0, area_width_m);
      const double y = std::clamp(cy + r * std::sin(phi), 0.0, area_height_m);
      out.push_back({id++, x, y, NodeKind::user});
    }
  }
  return out;
}

inline void validate_scenario(const Scenario& s) {
  s.channel.validate();
  s.thresholds.validate();
  if (!(s.area_width_m > 0) || !(s.area_height_m > 0))
    throw Error(ErrorCategory::schema_error, "scenario: area must be positive");
  std::vector<int> ids;
  for (const auto& n : s.nodes) {
    if (n.x < 0 || n.x > s.area_width_m || n.y < 0 || n.y > s.area_height_m)
      throw Error(ErrorCategory::schema_error,
                  "scenario: node " + std::to_string(n.id) + " outside area bounds");
    ids.push_back(n.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw Error(ErrorCategory::schema_error, "scenario: duplicate node ids");
  ids.clear();
  for (const auto& c : s.candidates) {
    if (c.x < 0 || c.x > s.area_width_m || c.y < 0 || c.y > s.area_height_m)
      throw Error(ErrorCategory::schema_error,
                  "scenario: candidate " + std::to_string(c.id) +
                      " outside area bounds");
    if (c.h != s.geometry.altitude_m)
      throw Error(ErrorCategory::schema_error,
                  "scenario: candidate " + std::to_string(c.id) +
                      " altitude differs from scenario altitude");
    ids.push_back(c.id);
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end())
    throw Error(ErrorCategory::schema_error, "scenario: duplicate candidate ids");
  if (!s.nodes.empty() && s.candidates.empty())
    throw Error(ErrorCategory::schema_error,
                "scenario: candidates required when nodes present");
  // geometry consistency: backhaul radius is always recomputable; the
  // ground radius only when the geometry is marked derived.
  const double rb = backhaul_radius(s.channel, s.thresholds.backhaul_snr_min_db);
  if (std::abs(rb - s.geometry.backhaul_radius_m) > 0.1)
    throw Error(ErrorCategory::schema_error,
                "scenario: backhaul radius inconsistent with channel/thresholds");
  if (s.geometry_mode == GeometryMode::derived) {
    const double rg =
        ground_radius(s.channel, s.thresholds.access_snr_min_db, s.geometry.altitude_m);
    if (std::abs(rg - s.geometry.ground_radius_m) > 0.1)
      throw Error(ErrorCategory::schema_error,
                  "scenario: ground radius inconsistent with channel/thresholds");
  }
  if (!(s.geometry.backhaul_radius_m > s.geometry.ground_radius_m))
    throw Error(ErrorCategory::schema_error,
                "scenario: backhaul radius must exceed ground radius");
}

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline double require_number(const ordered_json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_number())
    throw Error(ErrorCategory::schema_error, "scenario: missing field " + key);
  return j[key].get<double>();
}

}  // namespace detail

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["schema_version"] = kScenarioSchemaVersion;
  j["area"] = {{"width_m", s.area_width_m}, {"height_m", s.area_height_m}};
  j["channel"] = {{"carrier_frequency_hz", s.channel.carrier_frequency_hz},
                  {"env_a", s.channel.env_a},
                  {"env_b", s.channel.env_b},
                  {"loss_los_db", s.channel.loss_los_db},
                  {"loss_nlos_db", s.channel.loss_nlos_db},
                  {"tx_power_dbm", s.channel.tx_power_dbm},
                  {"noise_psd_dbm_hz", s.channel.noise_psd_dbm_hz},
                  {"bandwidth_hz", s.channel.bandwidth_hz},
                  {"light_speed_m_s", s.channel.light_speed_m_s}};
  j["thresholds"] = {{"access_snr_min_db", s.thresholds.access_snr_min_db},
                     {"backhaul_snr_min_db", s.thresholds.backhaul_snr_min_db}};
  j["geometry"] = {{"altitude_m", s.geometry.altitude_m},
                   {"ground_radius_m", s.geometry.ground_radius_m},
                   {"backhaul_radius_m", s.geometry.backhaul_radius_m},
                   {"mode", s.geometry_mode == GeometryMode::preset ? "preset"
                                                                    : "derived"}};
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& n : s.nodes)
    nodes.push_back({{"id", n.id},
                     {"x", n.x},
                     {"y", n.y},
                     {"kind", n.kind == NodeKind::user ? "user" : "terrestrial_bs"}});
  j["nodes"] = std::move(nodes);
  auto cands = nlohmann::ordered_json::array();
  for (const auto& c : s.candidates)
    cands.push_back({{"id", c.id}, {"x", c.x}, {"y", c.y}, {"h", c.h}});
  j["candidates"] = std::move(cands);
  j["rng_seed"] = s.rng_seed;
  return j;
}

inline Scenario scenario_from_json(const nlohmann::ordered_json& j) {
  if (!j.contains("schema_version") ||
      j["schema_version"].get<int>() != kScenarioSchemaVersion)
    throw Error(ErrorCategory::schema_error,
                "scenario: missing or unsupported schema_version");
  Scenario s;
  s.area_width_m = detail::require_number(j.at("area"), "width_m");
  s.area_height_m = detail::require_number(j.at("area"), "height_m");
  const auto& ch = j.at("channel");
  s.channel.carrier_frequency_hz = detail::require_number(ch, "carrier_frequency_hz");
  s.channel.env_a = detail::require_number(ch, "env_a");
  s.channel.env_b = detail::require_number(ch, "env_b");
  s.channel.loss_los_db = detail::require_number(ch, "loss_los_db");
  s.channel.loss_nlos_db = detail::require_number(ch, "loss_nlos_db");
  s.channel.tx_power_dbm = detail::require_number(ch, "tx_power_dbm");
  s.channel.noise_psd_dbm_hz = detail::require_number(ch, "noise_psd_dbm_hz");
  s.channel.bandwidth_hz = detail::require_number(ch, "bandwidth_hz");
  s.channel.light_speed_m_s = detail::require_number(ch, "light_speed_m_s");
  const auto& th = j.at("thresholds");
  s.thresholds.access_snr_min_db = detail::require_number(th, "access_snr_min_db");
  s.thresholds.backhaul_snr_min_db = detail::require_number(th, "backhaul_snr_min_db");
  const auto& g = j.at("geometry");
  s.geometry.altitude_m = detail::require_number(g, "altitude_m");
  s.geometry.ground_radius_m = detail::require_number(g, "ground_radius_m");
  s.geometry.backhaul_radius_m = detail::require_number(g, "backhaul_radius_m");
  const std::string mode = g.value("mode", "derived");
  if (mode != "derived" && mode != "preset")
    throw Error(ErrorCategory::schema_error, "scenario: bad geometry mode");
  s.geometry_mode = mode == "preset" ? GeometryMode::preset : GeometryMode::derived;
  for (const auto& nj : j.at("nodes")) {
    GroundNode n;
    n.id = static_cast<int>(detail::require_number(nj, "id"));
    n.x = detail::require_number(nj, "x");
    n.y = detail::require_number(nj, "y");
    const std::string kind = nj.value("kind", "");
    if (kind == "user")
      n.kind = NodeKind::user;
    else if (kind == "terrestrial_bs")
      n.kind = NodeKind::terrestrial_bs;
    else
      throw Error(ErrorCategory::schema_error, "scenario: bad node kind");
    s.nodes.push_back(n);
  }
  for (const auto& cj : j.at("candidates")) {
    CandidateLocation c;
    c.id = static_cast<int>(detail::require_number(cj, "id"));
    c.x = detail::require_number(cj, "x");
    c.y = detail::require_number(cj, "y");
    c.h = detail::require_number(cj, "h");
    s.candidates.push_back(c);
  }
  if (!j.contains("rng_seed"))
    throw Error(ErrorCategory::schema_error, "scenario: missing rng_seed");
  s.rng_seed = j["rng_seed"].get<std::uint64_t>();
  validate_scenario(s);
  return s;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path);
  if (!out)
    throw Error(ErrorCategory::io_error, "cannot open for writing: " + path);
  out << scenario_to_json(s).dump(2) << "\n";
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCategory::io_error, "cannot open: " + path);
  nlohmann::ordered_json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCategory::schema_error,
                std::string("scenario: malformed file: ") + e.what());
  }
  return scenario_from_json(j);
}

// Reference suburban working point: h = 1500 m with a fixed 3300 m ground
// radius, kept as a preset (the altitude-optimal derived radius differs);
// the backhaul radius is always derived from the threshold.
inline Scenario make_preset_scenario(double area_width_m, double area_height_m,
                                     int n_users, std::uint64_t seed,
                                     double backhaul_snr_min_db = 15.0,
                                     double cluster_radius_m = 1000.0,
                                     bool include_center_bs = true) {
  Scenario s;
  s.area_width_m = area_width_m;
  s.area_height_m = area_height_m;
  s.channel = ChannelParams{};
  s.thresholds = LinkThresholds{4.0, backhaul_snr_min_db};
  s.geometry.altitude_m = 1500.0;
  s.geometry.ground_radius_m = 3300.0;
  s.geometry.backhaul_radius_m = backhaul_radius(s.channel, backhaul_snr_min_db);
  s.geometry_mode = GeometryMode::preset;
  s.rng_seed = seed;
  s.nodes = generate_clustered_users(area_width_m, area_height_m, n_users, 10, 15,
                                     cluster_radius_m, seed);
  if (include_center_bs)
    s.nodes.push_back({static_cast<int>(s.nodes.size()), area_width_m / 2,
                       area_height_m / 2, NodeKind::terrestrial_bs});
  s.candidates = generate_grid(area_width_m, area_height_m,
                               s.geometry.ground_radius_m, s.geometry.altitude_m);
  validate_scenario(s);
  return s;
}

}  // namespace uavplan
