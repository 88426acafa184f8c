#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "auh/control.hpp"
#include "auh/core.hpp"
#include "auh/optical.hpp"
#include "auh/plant.hpp"
#include "auh/sensors.hpp"

namespace auh {

enum class Phase { Returning, CloseToDocking, Landing1, Landing2, Landing3, Docked };

std::string_view phase_name(Phase p);
std::optional<Phase> parse_phase(std::string_view name);
int phase_index(Phase p);

enum class VerticalMode { ConstantAltitude, ConstantDepth };
enum class NavMode { AcousticInertial, Optical };

// One row of the Homing/Landing parameter tables. Fields that a phase does
// not use are left unset.
struct PhaseParams {
  std::optional<double> distance_threshold;  // m
  std::optional<double> speed;               // cruise / transit speed, m/s
  VerticalMode vertical_mode = VerticalMode::ConstantDepth;
  double vertical_target = 0.0;  // altitude (ConstantAltitude) or depth, m
  std::optional<double> work_altitude;       // m above panel
  std::optional<double> yaw_threshold;       // deg
  std::optional<double> pitch_threshold;     // deg
  std::optional<double> roll_threshold;      // deg
  std::optional<double> depth_threshold;     // m
  std::optional<double> outer_radius;        // m
  std::optional<double> inner_radius;        // m
  std::optional<double> outer_speed;         // m/s, parsed but unused by the speed law
  double usbl_rate = 1.5;                    // fixes per minute
  bool upload = false;
  NavMode nav_mode = NavMode::AcousticInertial;
};

struct RingParams {
  double distance_threshold = 1.0;
  double work_altitude = 5.0;
  double transit_speed = 0.3;
  double outer_speed = 0.2;
  double outer_radius = 1.5;
  double inner_radius = 0.3;
  double yaw_threshold = 0.0;  // 0 = not checked
};

struct DockingParams {
  // Returning
  double range_threshold = 15.0;
  double returning_speed = 1.0;
  double returning_altitude = 7.0;  // m above seafloor
  double returning_usbl_rate = 1.5;
  bool returning_upload = true;
  // CloseToDocking
  double close_speed = 0.3;
  double close_altitude = 5.0;  // m above panel, held as a depth target
  double close_usbl_rate = 3.0;
  bool close_upload = false;
  // Landing
  RingParams landing1{1.0, 5.0, 0.3, 0.2, 1.5, 0.3, 0.0};
  RingParams landing2{0.7, 3.5, 0.3, 0.2, 1.5, 0.3, 10.0};
  double landing3_work_altitude = 0.2;
  double landing3_yaw_threshold = 45.0;
  double landing3_pitch_threshold = 5.0;
  double landing3_roll_threshold = 5.0;
  double landing3_depth_threshold = 0.2;
  double landing_usbl_rate = 1.5;
  bool landing_upload = true;
  // Timers and guidance tolerances
  double t_vis_min = 3.0;
  double dwell_time = 2.0;
  double light_loss_timeout = 10.0;
  double settle_timeout = 20.0;
  double altitude_tolerance = 0.1;  // m, work-altitude reached
  double capture_margin = 0.1;       // m beyond the inner radius

  void validate(const SdsGeometry& sds, const CameraParams& cam) const;
};

/// Table row for `phase`. Throws ContractViolation for Docked.
PhaseParams phase_params(Phase phase, const DockingParams& params,
                         const SdsGeometry& sds);

/// Linear speed decision: v_tr outside R_o, zero inside R_i, linear between.
/// Throws ConfigError unless 0 <= R_i < R_o.
double speed_decision(double r, double transit_speed, double inner_radius,
                      double outer_radius);

struct CriterionThresholds {
  double yaw = 45.0;
  double pitch = 5.0;
  double roll = 5.0;
  double depth = 0.2;
  double desired_yaw = 0.0;
  double desired_pitch = 0.0;
  double desired_roll = 0.0;
  double desired_depth = 0.0;
};

struct CriterionResult {
  int phi = 0;
  bool success = false;
};

/// Sum of four closed-interval indicators |value - desired| <= threshold
/// (yaw difference wrapped). Success iff all four pass.
CriterionResult docking_criterion(const Attitude& attitude, double depth,
                                  const CriterionThresholds& thr);

struct FsmState {
  Phase phase = Phase::Returning;
  double t_vis = 0.0;
  double light_lost = 0.0;
  double dwell = 0.0;
  double phase_time = 0.0;
  int criterion_attempts = 0;
};

struct FsmInputs {
  NavEstimate nav;
  SpotObservation spot;
  std::optional<Vec2> optical_fix;
  double depth = 0.0;
  Attitude attitude;
  double dt = 0.1;
};

struct FsmOutput {
  FsmState state;
  BehaviourSet behaviours;
  std::optional<Phase> transitioned_from;
  double r = 0.0;                      // horizontal distance used this tick
  std::optional<double> decided_speed; // Landing1/2 speed law output
  std::optional<int> phi;              // Landing3 criterion value
};

class InternalFault : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Advances the docking state machine by one tick (at most one transition)
/// and emits the behaviours for the resulting phase.
FsmOutput fsm_step(const FsmState& state, const FsmInputs& in,
                   const DockingParams& params, const SdsGeometry& sds);

}  // namespace auh
