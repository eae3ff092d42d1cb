#pragma once

#include <cmath>
#include <limits>

#include "uavplan/error.hpp"

namespace uavplan {

// Air-to-ground probabilistic LoS/NLoS channel plus pure-LoS UAV-to-UAV
// links. All powers are carried in dBm so reference offsets cancel in the
// SNR budget.
struct ChannelParams {
  double carrier_frequency_hz = 2e9;
  double env_a = 4.88;           // environment constant (dimensionless)
  double env_b = 0.429;          // environment constant (per degree)
  double loss_los_db = 0.1;      // LoS excess system loss
  double loss_nlos_db = 21.0;    // NLoS excess system loss
  double tx_power_dbm = 30.0;    // 1 W
  double noise_psd_dbm_hz = -174.0;
  double bandwidth_hz = 15e6;
  double light_speed_m_s = 299792458.0;

  void validate() const {
    if (!(carrier_frequency_hz > 0) || !(bandwidth_hz > 0) ||
        !(light_speed_m_s > 0))
      throw Error(ErrorCategory::invalid_argument,
                  "channel: frequency, bandwidth and light speed must be positive");
    if (!(env_a > 0) || !(env_b > 0))
      throw Error(ErrorCategory::invalid_argument,
                  "channel: environment constants must be positive");
    if (!(loss_nlos_db >= loss_los_db) || !(loss_los_db >= 0))
      throw Error(ErrorCategory::invalid_argument,
                  "channel: need loss_nlos >= loss_los >= 0");
  }

  double noise_power_dbm() const {
    return noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz);
  }
};

struct LinkThresholds {
  double access_snr_min_db = 4.0;    // gamma_0
  double backhaul_snr_min_db = 15.0; // gamma'_0

  void validate() const {
    if (!std::isfinite(access_snr_min_db) || !std::isfinite(backhaul_snr_min_db))
      throw Error(ErrorCategory::invalid_argument,
                  "thresholds: SNR thresholds must be finite");
  }
};

struct CoverageGeometry {
  double altitude_m = 0;
  double ground_radius_m = 0;
  double backhaul_radius_m = 0;
};

// Free-space path loss 20*log10(4*pi*f*d/c).
inline double free_space_path_loss_db(const ChannelParams& p, double dist_m) {
  return 20.0 * std::log10(4.0 * M_PI * p.carrier_frequency_hz * dist_m /
                           p.light_speed_m_s);
}

// Probability of a line-of-sight channel at elevation angle theta (degrees).
inline double los_probability(const ChannelParams& p, double elevation_deg) {
  return 1.0 / (1.0 + p.env_a * std::exp(-p.env_b * (elevation_deg - p.env_a)));
}

// Mean access-link path loss: LoS / NLoS mixture weighted by the LoS
// probability at the link's elevation angle. horiz_dist = 0 counts as a
// 90 degree elevation.
inline double access_path_loss(const ChannelParams& p, double horiz_dist_m,
                               double altitude_m) {
  if (!(altitude_m > 0))
    throw Error(ErrorCategory::invalid_argument,
                "access_path_loss: altitude must be positive");
  if (horiz_dist_m < 0)
    throw Error(ErrorCategory::invalid_argument,
                "access_path_loss: distance must be non-negative");
  const double d = std::hypot(horiz_dist_m, altitude_m);
  const double theta_deg =
      horiz_dist_m == 0.0
          ? 90.0
          : std::atan(altitude_m / horiz_dist_m) * 180.0 / M_PI;
  const double p_los = los_probability(p, theta_deg);
  const double fspl = free_space_path_loss_db(p, d);
  return p_los * (fspl + p.loss_los_db) + (1.0 - p_los) * (fspl + p.loss_nlos_db);
}

// UAV-to-UAV link: pure LoS, no excess loss term.
inline double backhaul_path_loss(const ChannelParams& p, double dist_3d_m) {
  if (!(dist_3d_m > 0))
    throw Error(ErrorCategory::invalid_argument,
                "backhaul_path_loss: distance must be positive");
  return free_space_path_loss_db(p, dist_3d_m);
}

inline double snr_db(const ChannelParams& p, double path_loss_db) {
  if (!std::isfinite(path_loss_db))
    throw Error(ErrorCategory::invalid_argument, "snr: path loss must be finite");
  return p.tx_power_dbm - path_loss_db - p.noise_power_dbm();
}

// Largest 3D distance at which the backhaul SNR threshold is still met,
// by inverting the pure-LoS loss in closed form.
inline double backhaul_radius(const ChannelParams& p, double backhaul_snr_min_db) {
  const double max_loss = p.tx_power_dbm - backhaul_snr_min_db - p.noise_power_dbm();
  return p.light_speed_m_s / (4.0 * M_PI * p.carrier_frequency_hz) *
         std::pow(10.0, max_loss / 20.0);
}

// Largest horizontal distance at which the access SNR threshold is met at
// the given altitude. Bisection to 0.1 m on a bracket found by doubling.
inline double ground_radius(const ChannelParams& p, double access_snr_min_db,
                            double altitude_m) {
  auto ok = [&](double r) {
    return snr_db(p, access_path_loss(p, r, altitude_m)) >= access_snr_min_db;
  };
  if (!ok(0.0))
    throw Error(ErrorCategory::infeasible_coverage,
                "coverage_radii: SNR below threshold even directly under the UAV");
  double lo = 0.0, hi = std::max(altitude_m, 1.0);
  while (ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9)
      throw Error(ErrorCategory::invalid_argument,
                  "coverage_radii: no finite coverage boundary found");
  }
  while (hi - lo > 0.1) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? lo : hi) = mid;
  }
  return lo;
}

inline CoverageGeometry coverage_radii(const ChannelParams& p,
                                       const LinkThresholds& t,
                                       double altitude_m) {
  if (!(altitude_m > 0))
    throw Error(ErrorCategory::invalid_argument,
                "coverage_radii: altitude must be positive");
  CoverageGeometry g;
  g.altitude_m = altitude_m;
  g.ground_radius_m = ground_radius(p, t.access_snr_min_db, altitude_m);
  g.backhaul_radius_m = backhaul_radius(p, t.backhaul_snr_min_db);
  return g;
}

// Altitude in [h_min, h_max] maximizing the ground coverage radius.
// Golden-section search, 1 m tolerance; ground_radius(h) is unimodal on
// the ranges of interest.
inline CoverageGeometry optimal_altitude(const ChannelParams& p,
                                         const LinkThresholds& t,
                                         double h_min, double h_max) {
  if (!(0 < h_min) || !(h_min <= h_max))
    throw Error(ErrorCategory::invalid_argument,
                "optimal_altitude: need 0 < h_min <= h_max");
  auto radius_or_zero = [&](double h) {
    try {
      return ground_radius(p, t.access_snr_min_db, h);
    } catch (const Error&) {
      return 0.0;  // threshold unreachable at this altitude
    }
  };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = h_min, b = h_max;
  double c = b - (b - a) * inv_phi;
  double d = a + (b - a) * inv_phi;
  double fc = radius_or_zero(c), fd = radius_or_zero(d);
  while (b - a > 1.0) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - (b - a) * inv_phi;
      fc = radius_or_zero(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + (b - a) * inv_phi;
      fd = radius_or_zero(d);
    }
  }
  double best_h = 0.5 * (a + b);
  double best_r = radius_or_zero(best_h);
  // endpoints are legal answers too
  for (double h : {h_min, h_max}) {
    const double r = radius_or_zero(h);
    if (r > best_r) {
      best_r = r;
      best_h = h;
    }
  }
  if (best_r <= 0.0)
    throw Error(ErrorCategory::infeasible_coverage,
                "optimal_altitude: no altitude in range yields positive coverage");
  CoverageGeometry g;
  g.altitude_m = best_h;
  g.ground_radius_m = best_r;
  g.backhaul_radius_m = backhaul_radius(p, t.backhaul_snr_min_db);
  return g;
}

}  // namespace uavplan
