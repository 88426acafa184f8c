#pragma once

#include "auh/core.hpp"
#include "auh/rng.hpp"

namespace auh {

// Decoupled surge / heave / yaw model with quadratic drag plus a passive
// roll/pitch process. Full surge thrust balances surge drag at 1 m/s.
struct PlantParams {
  double mass = 760.0;             // kg, dry
  double surge_inertia = 1200.0;   // kg, incl. added mass
  double heave_inertia = 1600.0;   // kg, incl. added mass
  double yaw_inertia = 400.0;      // kg m^2
  double surge_drag = 300.0;       // N s^2/m^2
  double heave_drag = 1000.0;      // N s^2/m^2
  double yaw_drag = 525.0;         // N m s^2/rad^2
  double max_surge_thrust = 300.0; // N
  double max_heave_thrust = 200.0; // N
  double max_yaw_torque = 100.0;   // N m
  double u_max = 1.2;              // m/s
  double w_max = 0.5;              // m/s
  double r_max = 30.0;             // deg/s
  double attitude_time_constant = 3.0;  // s
  double attitude_noise = 1.0;          // deg, stationary sigma
  // Resting on the SDS frame away from the funnel tilts the hull.
  double contact_height = 0.5;     // m above panel (frame rim)
  double funnel_radius = 0.5;      // m
  double contact_tilt = 8.0;       // deg

  void validate() const;
};

struct CurrentField {
  double mean_x = 0.0;        // m/s
  double mean_y = 0.0;        // m/s
  double gust_amplitude = 0.0;  // m/s
  double gust_period = 60.0;    // s
  double gust_dir_x = 1.0;      // unit direction of the gust component
  double gust_dir_y = 0.0;

  void validate() const;
};

struct PlantState {
  Pose pose;
  BodyVelocity vel;
};

/// Current velocity at time t: mean plus a sinusoidal gust along the
/// configured direction.
Vec2 current_at(double t, const CurrentField& field);

/// One semi-implicit Euler step. Velocities are updated first from thrust
/// minus quadratic drag, then positions integrate the new body velocities
/// rotated by yaw plus the current. Roll/pitch follow a seeded
/// Ornstein-Uhlenbeck process toward zero.
PlantState plant_step(const Pose& pose, const BodyVelocity& vel,
                      const ActuatorCommand& cmd, Vec2 current, double dt,
                      const PlantParams& params, Rng& rng);

struct SdsGeometry {
  Vec2 center{};
  double panel_depth = 28.0;    // m
  double seafloor_depth = 30.0; // m
  double footprint_half_width = 1.5;  // m
  double yaw = 0.0;             // deg, docking orientation
};

/// Applies the seabed and SDS panel as hard floors. A vehicle resting within
/// `contact_height` of the panel outside the funnel radius is tilted by
/// `contact_tilt`.
PlantState settle_on_panel(PlantState state, const SdsGeometry& sds,
                           const PlantParams& params);

}  // namespace auh
