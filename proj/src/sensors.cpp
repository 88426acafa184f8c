#include "auh/sensors.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace auh {

namespace {
constexpr double kTimeEps = 1e-9;
}

SensorNoise SensorNoise::scaled(double k) const {
  SensorNoise n = *this;
  n.imu_deg *= k;
  n.dvl_velocity *= k;
  n.depth *= k;
  n.altimeter *= k;
  n.usbl_position *= k;
  return n;
}

void SensorNoise::validate() const {
  const std::pair<const char*, double> sigmas[] = {
      {"noise.imu_deg", imu_deg},     {"noise.dvl_velocity", dvl_velocity},
      {"noise.depth", depth},         {"noise.altimeter", altimeter},
      {"noise.usbl_position", usbl_position}};
  for (const auto& [key, v] : sigmas) {
    if (!(v >= 0.0)) throw ConfigError(std::string(key) + " must be non-negative", key);
  }
  if (!(dvl_dropout >= 0.0 && dvl_dropout <= 1.0)) {
    throw ConfigError("noise.dvl_dropout must lie in [0, 1]", "noise.dvl_dropout");
  }
}

void NavParams::validate() const {
  const std::pair<const char*, double> non_negatives[] = {
      {"nav.drift_per_meter", drift_per_meter},
      {"nav.drift_floor_rate", drift_floor_rate},
      {"nav.initial_error", initial_error},
      {"nav.optical_drift", optical_drift}};
  for (const auto& [key, v] : non_negatives) {
    if (!(v >= 0.0)) throw ConfigError(std::string(key) + " must be non-negative", key);
  }
  if (!(max_fix_age > 0)) {
    throw ConfigError("nav.max_fix_age must be positive", "nav.max_fix_age");
  }
}

bool UsblLink::uploading(double t) const { return t + kTimeEps < busy_until; }

ImuReading sample_imu(const Pose& pose, double t, double sigma_deg, Rng& rng) {
  ImuReading r;
  r.roll = wrap_angle(pose.roll + rng.gaussian(sigma_deg));
  r.pitch = wrap_angle(pose.pitch + rng.gaussian(sigma_deg));
  r.yaw = wrap_angle(pose.yaw + rng.gaussian(sigma_deg));
  r.t = t;
  return r;
}

DvlReading sample_dvl(const Pose& pose, const BodyVelocity& vel, Vec2 current,
                      const SdsGeometry& sds, const SensorNoise& noise,
                      Rng& rng) {
  DvlReading d;
  if (noise.dvl_dropout > 0.0 && rng.uniform() < noise.dvl_dropout) {
    return d;
  }
  const Vec2 c_body = rotate_earth_to_body(current, pose.yaw);
  d.u = vel.u + c_body.x + rng.gaussian(noise.dvl_velocity);
  d.v = c_body.y + rng.gaussian(noise.dvl_velocity);
  d.w = vel.w + rng.gaussian(noise.dvl_velocity);
  const double floor = over_footprint(pose.horizontal(), sds) ? sds.panel_depth
                                                               : sds.seafloor_depth;
  d.altitude = floor - pose.z;
  d.valid = true;
  return d;
}

double sample_depth(const Pose& pose, double sigma, Rng& rng) {
  return pose.z + rng.gaussian(sigma);
}

bool over_footprint(Vec2 position, const SdsGeometry& sds) {
  return std::abs(position.x - sds.center.x) <= sds.footprint_half_width &&
         std::abs(position.y - sds.center.y) <= sds.footprint_half_width;
}

AltimeterReading sample_altimeter(const Pose& pose, const SdsGeometry& sds,
                                  double sigma, Rng& rng) {
  const double truth = sds.seafloor_depth - pose.z;
  if (over_footprint(pose.horizontal(), sds)) {
    return {truth * (1.0 + rng.uniform(-0.5, 0.5)), true};
  }
  return {truth + rng.gaussian(sigma), false};
}

double usbl_interval(double rate_per_min) {
  if (rate_per_min == 1.5) return 40.0;
  if (rate_per_min == 3.0) return 20.0;
  throw ConfigError("usbl: unsupported rate " + std::to_string(rate_per_min) +
                    " (expected 1.5 or 3 per minute)");
}

std::optional<UsblFix> usbl_poll(double t, double rate_per_min, bool upload,
                                 UsblLink& link, const Pose& truth,
                                 double sigma, const UsblLinkParams& params,
                                 Rng& rng) {
  const double interval = usbl_interval(rate_per_min);
  if (!link.pending_fix_at && t + kTimeEps >= link.next_cycle) {
    double start = link.next_cycle;
    // Cycles missed entirely (link polled late) are dropped, not replayed.
    while (t + kTimeEps >= start + interval) start += interval;
    link.next_cycle = start + interval;
    link.pending_upload = upload;
    if (upload) {
      link.busy_until = start + params.upload_duration;
      link.pending_fix_at = link.busy_until;
      ++link.uploads_started;
    } else {
      link.pending_fix_at = start;
    }
  }
  if (!link.pending_fix_at || t + kTimeEps < *link.pending_fix_at ||
      link.uploading(t)) {
    return std::nullopt;
  }
  UsblFix fix;
  fix.x = truth.x + rng.gaussian(sigma);
  fix.y = truth.y + rng.gaussian(sigma);
  fix.z = truth.z + rng.gaussian(sigma);
  fix.emitted_at = t;
  fix.latency = params.latency;
  fix.carries_upload = link.pending_upload;
  link.pending_fix_at.reset();
  ++link.fixes_emitted;
  return fix;
}

NavEstimate dead_reckon(const NavEstimate& nav, const ImuReading& imu,
                        const DvlReading& dvl, double dt,
                        const NavParams& params) {
  if (!(dt > 0.0)) throw DomainError("dead_reckon: dt must be positive");
  NavEstimate out = nav;
  out.yaw = imu.yaw;
  double u = nav.last_u;
  double v = nav.last_v;
  double growth = 1.0;
  if (dvl.valid) {
    u = dvl.u;
    v = dvl.v;
    out.last_u = u;
    out.last_v = v;
  } else {
    growth = 2.0;
  }
  const Vec2 step = rotate_body_to_earth({u * dt, v * dt}, out.yaw);
  out.x += step.x;
  out.y += step.y;
  out.drift += growth * (params.drift_per_meter * norm(step) +
                         params.drift_floor_rate * dt);
  return out;
}

NavEstimate usbl_correct(const NavEstimate& nav, const UsblFix& fix, double now,
                         double sigma, const NavParams& params) {
  if (now - fix.emitted_at > params.max_fix_age) return nav;
  const double d2 = nav.drift * nav.drift;
  const double s2 = sigma * sigma;
  if (d2 + s2 == 0.0) return nav;
  const double gain = d2 / (d2 + s2);
  NavEstimate out = nav;
  out.x += gain * (fix.x - nav.x);
  out.y += gain * (fix.y - nav.y);
  out.drift = std::sqrt(d2 * s2 / (d2 + s2));
  return out;
}

}  // namespace auh
