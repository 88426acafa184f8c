#include "auh/plant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace auh {

void PlantParams::validate() const {
  const std::pair<const char*, double> positives[] = {
      {"plant.mass", mass},
      {"plant.surge_inertia", surge_inertia},
      {"plant.heave_inertia", heave_inertia},
      {"plant.yaw_inertia", yaw_inertia},
      {"plant.surge_drag", surge_drag},
      {"plant.heave_drag", heave_drag},
      {"plant.yaw_drag", yaw_drag},
      {"plant.max_surge_thrust", max_surge_thrust},
      {"plant.max_heave_thrust", max_heave_thrust},
      {"plant.max_yaw_torque", max_yaw_torque},
      {"plant.u_max", u_max},
      {"plant.w_max", w_max},
      {"plant.r_max", r_max},
      {"plant.attitude_time_constant", attitude_time_constant}};
  for (const auto& [key, v] : positives) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ConfigError(std::string(key) + " must be positive", key);
    }
  }
  const std::pair<const char*, double> non_negatives[] = {
      {"plant.attitude_noise", attitude_noise},
      {"plant.contact_height", contact_height},
      {"plant.funnel_radius", funnel_radius}};
  for (const auto& [key, v] : non_negatives) {
    if (!(v >= 0.0)) throw ConfigError(std::string(key) + " must be non-negative", key);
  }
}

void CurrentField::validate() const {
  if (!(gust_period > 0.0)) {
    throw ConfigError("current.gust_period must be positive", "current.gust_period");
  }
  if (!(gust_amplitude >= 0.0)) {
    throw ConfigError("current.gust_amplitude must be non-negative", "current.gust_amplitude");
  }
}

Vec2 current_at(double t, const CurrentField& field) {
  if (field.gust_amplitude == 0.0) return {field.mean_x, field.mean_y};
  const double g = field.gust_amplitude *
                   std::sin(2.0 * std::numbers::pi * t / field.gust_period);
  return {field.mean_x + g * field.gust_dir_x, field.mean_y + g * field.gust_dir_y};
}

namespace {

// v' = (F - d v|v|) / m, explicit in drag.
double drag_update(double v, double force, double drag, double inertia, double dt) {
  return v + dt * (force - drag * v * std::abs(v)) / inertia;
}

}  // namespace

PlantState plant_step(const Pose& pose, const BodyVelocity& vel,
                      const ActuatorCommand& cmd, Vec2 current, double dt,
                      const PlantParams& p, Rng& rng) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("plant_step: dt must be positive");
  }
  const ActuatorCommand c = ActuatorCommand::clamped(cmd.fx, cmd.fz, cmd.tz);

  BodyVelocity v;
  v.u = std::clamp(drag_update(vel.u, p.max_surge_thrust * c.fx, p.surge_drag,
                               p.surge_inertia, dt),
                   -p.u_max, p.u_max);
  v.w = std::clamp(drag_update(vel.w, p.max_heave_thrust * c.fz, p.heave_drag,
                               p.heave_inertia, dt),
                   -p.w_max, p.w_max);
  const double r_rad = drag_update(deg2rad(vel.r_yaw), p.max_yaw_torque * c.tz,
                                   p.yaw_drag, p.yaw_inertia, dt);
  v.r_yaw = std::clamp(rad2deg(r_rad), -p.r_max, p.r_max);

  Pose next = pose;
  const double yaw = deg2rad(pose.yaw);
  next.x += dt * (v.u * std::cos(yaw) + current.x);
  next.y += dt * (v.u * std::sin(yaw) + current.y);
  next.z += dt * v.w;
  next.yaw = wrap_angle(pose.yaw + dt * v.r_yaw);

  const double decay = std::exp(-dt / p.attitude_time_constant);
  const double kick = p.attitude_noise * std::sqrt(1.0 - decay * decay);
  next.roll = std::clamp(pose.roll * decay + rng.gaussian(kick), -90.0, 90.0);
  next.pitch = std::clamp(pose.pitch * decay + rng.gaussian(kick), -90.0, 90.0);
  return {next, v};
}

PlantState settle_on_panel(PlantState s, const SdsGeometry& sds,
                           const PlantParams& p) {
  const double dx = s.pose.x - sds.center.x;
  const double dy = s.pose.y - sds.center.y;
  const bool over_sds = std::abs(dx) <= sds.footprint_half_width &&
                        std::abs(dy) <= sds.footprint_half_width;
  const double floor = over_sds ? sds.panel_depth : sds.seafloor_depth;
  if (s.pose.z >= floor) {
    s.pose.z = floor;
    s.vel.w = std::min(s.vel.w, 0.0);
  }
  if (s.pose.z < 0.0) {
    s.pose.z = 0.0;
    s.vel.w = std::max(s.vel.w, 0.0);
  }
  if (over_sds && sds.panel_depth - s.pose.z <= p.contact_height &&
      std::hypot(dx, dy) > p.funnel_radius) {
    s.pose.pitch = p.contact_tilt;
  }
  return s;
}

}  // namespace auh
