#include "auh/control.hpp"

#include <algorithm>
#include <cmath>

namespace auh {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

HelmOutput helm_resolve(const BehaviourSet& behaviours, const NavEstimate& nav,
                        const AltimeterReading& altimeter, double depth) {
  HelmOutput out;
  Setpoints& sp = out.setpoints;
  bool has_depth = false;
  bool has_altitude = false;
  for (const Behaviour& b : behaviours) {
    std::visit(
        overloaded{
            [&](const ConstantDepth& d) {
              has_depth = true;
              sp.depth = d.depth;
              sp.depth_active = true;
            },
            [&](const ConstantAltitude& a) {
              has_altitude = true;
              sp.depth_active = true;
              if (altimeter.occluded) {
                out.altitude_fault = true;
                sp.depth = depth;
              } else {
                sp.depth = depth + altimeter.altitude - a.altitude;
              }
            },
            [&](const ConstantSpeed& s) {
              sp.speed = std::max(0.0, s.speed);
              sp.speed_active = true;
            },
            [&](const Waypoint& w) {
              const Vec2 here = nav.horizontal();
              const Vec2 target{w.x, w.y};
              const double dist = norm({target.x - here.x, target.y - here.y});
              if (dist <= w.capture_radius) {
                sp.yaw = wrap_angle(w.hold_yaw.value_or(nav.yaw));
              } else {
                sp.yaw = bearing_deg(here, target);
              }
              sp.yaw_active = true;
            },
        },
        b);
  }
  if (has_depth && has_altitude) {
    throw ContractViolation(
        "helm_resolve: ConstantDepth and ConstantAltitude are mutually exclusive");
  }
  return out;
}

PidResult pid_step(const PidState& pid, double error, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("pid_step: dt must be positive");
  }
  const PidGains& g = pid.gains;
  PidState s = pid;
  s.integral = std::clamp(s.integral + error * dt, -g.integral_limit, g.integral_limit);

  double raw_derivative = 0.0;
  if (s.primed) {
    double diff = error - s.prev_error;
    if (g.angular) diff = wrap_angle(diff);
    raw_derivative = diff / dt;
  }
  s.derivative = s.primed ? g.derivative_smoothing * s.derivative +
                                (1.0 - g.derivative_smoothing) * raw_derivative
                          : 0.0;
  s.prev_error = error;
  s.primed = true;

  const double u = g.kp * error + g.ki * s.integral + g.kd * s.derivative;
  return {std::clamp(u, -g.output_limit, g.output_limit), s};
}

ControllerBank default_controllers() {
  ControllerBank bank;
  bank.yaw.gains = {.kp = 0.05, .ki = 0.002, .kd = 0.06, .output_limit = 1.0,
                    .integral_limit = 100.0, .derivative_smoothing = 0.5,
                    .angular = true};
  bank.speed.gains = {.kp = 2.0, .ki = 0.5, .kd = 0.0, .output_limit = 1.0,
                      .integral_limit = 2.0, .derivative_smoothing = 0.5};
  bank.depth.gains = {.kp = 0.8, .ki = 0.01, .kd = 4.0, .output_limit = 1.0,
                      .integral_limit = 2.0, .derivative_smoothing = 0.8};
  return bank;
}

ControlResult control_step(const Setpoints& sp, double yaw, double speed,
                           double depth, const ControllerBank& controllers,
                           double dt) {
  ControlResult out{{}, controllers};
  double tz = 0.0;
  double fx = 0.0;
  double fz = 0.0;
  if (sp.yaw_active) {
    auto r = pid_step(controllers.yaw, wrap_angle(sp.yaw - yaw), dt);
    tz = r.output;
    out.controllers.yaw = r.state;
  }
  if (sp.speed_active) {
    auto r = pid_step(controllers.speed, sp.speed - speed, dt);
    fx = r.output;
    out.controllers.speed = r.state;
  }
  if (sp.depth_active) {
    auto r = pid_step(controllers.depth, sp.depth - depth, dt);
    fz = r.output;
    out.controllers.depth = r.state;
  }
  out.command = ActuatorCommand::clamped(fx, fz, tz);
  return out;
}

}  // namespace auh
