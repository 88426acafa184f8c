#pragma once

#include <limits>
#include <optional>

#include "auh/core.hpp"
#include "auh/plant.hpp"
#include "auh/rng.hpp"

namespace auh {

struct SensorNoise {
  double imu_deg = 0.5;        // per-axis attitude noise
  double dvl_velocity = 0.01;  // m/s
  double depth = 0.02;         // m, pressure depth
  double altimeter = 0.05;     // m, outside the occlusion footprint
  double usbl_position = 1.0;  // m per axis
  double dvl_dropout = 0.0;    // probability a DVL ping is invalid

  /// Returns a copy with every noise sigma multiplied by `k`.
  SensorNoise scaled(double k) const;
  void validate() const;
};

struct ImuReading {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
  double t = 0.0;
};

// Over-ground velocity in the body frame (bottom track).
struct DvlReading {
  double u = 0.0;
  double v = 0.0;  // sway over ground
  double w = 0.0;
  double altitude = 0.0;
  bool valid = false;
};

struct AltimeterReading {
  double altitude = 0.0;
  bool occluded = false;
};

struct UsblFix {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double emitted_at = 0.0;
  double latency = 0.0;
  bool carries_upload = false;
};

// Navigation belief from dead reckoning with sparse USBL corrections.
// `drift` is a scalar 1-sigma radius standing in for a covariance.
struct NavEstimate {
  double x = 0.0;
  double y = 0.0;
  double yaw = 0.0;
  double drift = 0.0;
  double last_u = 0.0;
  double last_v = 0.0;

  Vec2 horizontal() const { return {x, y}; }
};

struct NavParams {
  double drift_per_meter = 0.05;  // m of drift per m travelled
  double drift_floor_rate = 0.0;  // m/s of drift while stationary
  double max_fix_age = 60.0;      // s
  double initial_error = 1.0;     // m, sigma of the initial estimate error
  double optical_drift = 0.05;    // m, drift radius after an optical fix

  void validate() const;
};

struct UsblLinkParams {
  double latency = 1.0;          // s between emission and delivery
  double upload_duration = 20.0; // s the transmitter is busy uploading
};

// Half-duplex acoustic link schedule: one location cycle per 60/rate s. A
// cycle carrying a status upload keeps the link busy for `upload_duration`
// first, then emits the fix.
struct UsblLink {
  double next_cycle = 0.0;
  double busy_until = -std::numeric_limits<double>::infinity();
  std::optional<double> pending_fix_at;
  bool pending_upload = false;
  int fixes_emitted = 0;
  int uploads_started = 0;

  bool uploading(double t) const;
};

ImuReading sample_imu(const Pose& pose, double t, double sigma_deg, Rng& rng);

DvlReading sample_dvl(const Pose& pose, const BodyVelocity& vel, Vec2 current,
                      const SdsGeometry& sds, const SensorNoise& noise, Rng& rng);

double sample_depth(const Pose& pose, double sigma, Rng& rng);

/// Footprint test used for altimeter occlusion (boundary inclusive).
bool over_footprint(Vec2 position, const SdsGeometry& sds);

/// Outside the SDS footprint: seafloor altitude plus noise. Inside: occluded,
/// altitude replaced by a uniform fluctuation within +-50% of truth.
AltimeterReading sample_altimeter(const Pose& pose, const SdsGeometry& sds,
                                  double sigma, Rng& rng);

/// Interval between fixes for a supported rate (1.5 or 3 per minute).
double usbl_interval(double rate_per_min);

/// Advances the link schedule to time t and returns a fix if one is emitted
/// this tick. Throws ConfigError for unsupported rates.
std::optional<UsblFix> usbl_poll(double t, double rate_per_min, bool upload,
                                 UsblLink& link, const Pose& truth,
                                 double sigma, const UsblLinkParams& params,
                                 Rng& rng);

NavEstimate dead_reckon(const NavEstimate& nav, const ImuReading& imu,
                        const DvlReading& dvl, double dt, const NavParams& params);

/// Blends the estimate toward the fix with gain drift^2 / (drift^2 + sigma^2).
/// Fixes older than params.max_fix_age at `now` are rejected.
NavEstimate usbl_correct(const NavEstimate& nav, const UsblFix& fix, double now,
                         double sigma, const NavParams& params);

}  // namespace auh
