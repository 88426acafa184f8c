#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "auh/core.hpp"
#include "auh/sensors.hpp"

namespace auh {

struct ConstantDepth {
  double depth = 0.0;  // m
};

struct ConstantAltitude {
  double altitude = 0.0;  // m above seafloor
};

struct ConstantSpeed {
  double speed = 0.0;  // m/s
};

// Heads for (x, y); once within `capture_radius` holds `hold_yaw` instead
// (or the current heading when no hold yaw is given).
struct Waypoint {
  double x = 0.0;
  double y = 0.0;
  std::optional<double> hold_yaw;
  double capture_radius = 0.0;
};

using Behaviour = std::variant<ConstantDepth, ConstantAltitude, ConstantSpeed, Waypoint>;
using BehaviourSet = std::vector<Behaviour>;

// Desired yaw / speed / depth. A channel without an active behaviour stays
// disengaged and its controller outputs zero.
struct Setpoints {
  double yaw = 0.0;
  double speed = 0.0;
  double depth = 0.0;
  bool yaw_active = false;
  bool speed_active = false;
  bool depth_active = false;
};

struct HelmOutput {
  Setpoints setpoints;
  bool altitude_fault = false;  // ConstantAltitude requested while occluded
};

/// Arbitrates the active behaviours into setpoints. Throws ContractViolation
/// when both vertical behaviours are present. A ConstantAltitude request
/// over an occluded altimeter holds the current depth and raises
/// `altitude_fault`.
HelmOutput helm_resolve(const BehaviourSet& behaviours, const NavEstimate& nav,
                        const AltimeterReading& altimeter, double depth);

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double output_limit = 1.0;
  double integral_limit = 1.0e9;
  double derivative_smoothing = 0.5;  // weight of the previous filtered derivative
  bool angular = false;               // wrap error differences into (-180, 180]
};

struct PidState {
  PidGains gains;
  double integral = 0.0;
  double prev_error = 0.0;
  double derivative = 0.0;
  bool primed = false;
};

struct PidResult {
  double output = 0.0;
  PidState state;
};

/// Positional PID with derivative on error (first-order smoothed), clamped
/// integral and clamped output. Throws DomainError for dt <= 0.
PidResult pid_step(const PidState& pid, double error, double dt);

struct ControllerBank {
  PidState yaw;
  PidState speed;
  PidState depth;
};

ControllerBank default_controllers();

struct ControlResult {
  ActuatorCommand command;
  ControllerBank controllers;
};

/// Yaw, speed and vertical loops. Yaw error is wrap_angle(sp.yaw - yaw).
ControlResult control_step(const Setpoints& sp, double yaw, double speed,
                           double depth, const ControllerBank& controllers,
                           double dt);

}  // namespace auh
