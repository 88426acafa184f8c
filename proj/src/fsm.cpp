#include "auh/fsm.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace auh {

namespace {

constexpr double kEps = 1e-9;

constexpr std::array<std::string_view, 6> kPhaseNames = {
    "Returning", "CloseToDocking", "Landing1", "Landing2", "Landing3", "Docked"};

bool is_landing(Phase p) {
  return p == Phase::Landing1 || p == Phase::Landing2 || p == Phase::Landing3;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(what) + " must be positive", what);
  }
}

void validate_ring(const RingParams& ring, const char* name, double panel_depth,
                   const CameraParams& cam) {
  const std::string n(name);
  require_positive(ring.distance_threshold, (n + ".distance_threshold").c_str());
  require_positive(ring.work_altitude, (n + ".work_altitude").c_str());
  require_positive(ring.transit_speed, (n + ".transit_speed").c_str());
  require_positive(ring.outer_speed, (n + ".outer_speed").c_str());
  require_positive(ring.outer_radius, (n + ".outer_radius").c_str());
  if (ring.inner_radius < 0.0 || ring.inner_radius >= ring.outer_radius) {
    throw ConfigError(n + ": inner_radius must satisfy 0 <= R_i < R_o",
                      n + ".inner_radius");
  }
  const double reach = effective_radius(ring.work_altitude, cam.divergence);
  if (ring.outer_radius >= reach) {
    throw ConfigError(n + ": outer_radius must be smaller than the effective "
                          "illumination radius at the work altitude (" +
                          std::to_string(reach) + " m)",
                      n + ".outer_radius");
  }
  if (ring.work_altitude >= panel_depth) {
    throw ConfigError(n + ": work_altitude must be below the SDS panel depth",
                      n + ".work_altitude");
  }
  if (ring.yaw_threshold < 0.0) {
    throw ConfigError(n + ".yaw_threshold must be non-negative", n + ".yaw_threshold");
  }
}

}  // namespace

std::string_view phase_name(Phase p) { return kPhaseNames[phase_index(p)]; }

int phase_index(Phase p) { return static_cast<int>(p); }

std::optional<Phase> parse_phase(std::string_view name) {
  for (std::size_t i = 0; i < kPhaseNames.size(); ++i) {
    if (kPhaseNames[i] == name) return static_cast<Phase>(i);
  }
  return std::nullopt;
}

void DockingParams::validate(const SdsGeometry& sds, const CameraParams& cam) const {
  require_positive(range_threshold, "returning.range_threshold");
  require_positive(returning_speed, "returning.speed");
  require_positive(returning_altitude, "returning.altitude");
  require_positive(close_speed, "close_to_docking.speed");
  require_positive(close_altitude, "close_to_docking.altitude");
  auto check_rate = [](double rate, const char* key) {
    try {
      usbl_interval(rate);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), key);
    }
  };
  check_rate(returning_usbl_rate, "returning.usbl_rate");
  check_rate(close_usbl_rate, "close_to_docking.usbl_rate");
  check_rate(landing_usbl_rate, "landing.usbl_rate");
  validate_ring(landing1, "landing1", sds.panel_depth, cam);
  validate_ring(landing2, "landing2", sds.panel_depth, cam);
  require_positive(landing3_work_altitude, "landing3.work_altitude");
  require_positive(landing3_yaw_threshold, "landing3.yaw_threshold");
  require_positive(landing3_pitch_threshold, "landing3.pitch_threshold");
  require_positive(landing3_roll_threshold, "landing3.roll_threshold");
  require_positive(landing3_depth_threshold, "landing3.depth_threshold");
  if (landing3_work_altitude >= sds.panel_depth) {
    throw ConfigError("landing3.work_altitude must be below the SDS panel depth",
                      "landing3.work_altitude");
  }
  if (close_altitude >= sds.panel_depth) {
    throw ConfigError("close_to_docking.altitude must be below the SDS panel depth",
                      "close_to_docking.altitude");
  }
  if (returning_altitude >= sds.seafloor_depth) {
    throw ConfigError("returning.altitude must be below the seafloor depth",
                      "returning.altitude");
  }
  require_positive(t_vis_min, "timers.t_vis_min");
  require_positive(dwell_time, "timers.dwell_time");
  require_positive(light_loss_timeout, "timers.light_loss_timeout");
  require_positive(settle_timeout, "timers.settle_timeout");
  require_positive(altitude_tolerance, "landing.altitude_tolerance");
  if (capture_margin < 0.0) {
    throw ConfigError("landing.capture_margin must be non-negative", "landing.capture_margin");
  }
}

PhaseParams phase_params(Phase phase, const DockingParams& p, const SdsGeometry& sds) {
  PhaseParams row;
  switch (phase) {
    case Phase::Returning:
      row.distance_threshold = p.range_threshold;
      row.speed = p.returning_speed;
      row.vertical_mode = VerticalMode::ConstantAltitude;
      row.vertical_target = p.returning_altitude;
      row.usbl_rate = p.returning_usbl_rate;
      row.upload = p.returning_upload;
      return row;
    case Phase::CloseToDocking:
      row.distance_threshold = p.range_threshold;
      row.speed = p.close_speed;
      row.vertical_mode = VerticalMode::ConstantDepth;
      row.work_altitude = p.close_altitude;
      row.vertical_target = sds.panel_depth - p.close_altitude;
      row.usbl_rate = p.close_usbl_rate;
      row.upload = p.close_upload;
      return row;
    case Phase::Landing1:
    case Phase::Landing2: {
      const RingParams& ring = phase == Phase::Landing1 ? p.landing1 : p.landing2;
      row.distance_threshold = ring.distance_threshold;
      row.speed = ring.transit_speed;
      row.vertical_mode = VerticalMode::ConstantDepth;
      row.work_altitude = ring.work_altitude;
      row.vertical_target = sds.panel_depth - ring.work_altitude;
      if (ring.yaw_threshold > 0.0) row.yaw_threshold = ring.yaw_threshold;
      row.outer_radius = ring.outer_radius;
      row.inner_radius = ring.inner_radius;
      row.outer_speed = ring.outer_speed;
      row.usbl_rate = p.landing_usbl_rate;
      row.upload = p.landing_upload;
      row.nav_mode = NavMode::Optical;
      return row;
    }
    case Phase::Landing3:
      row.vertical_mode = VerticalMode::ConstantDepth;
      row.work_altitude = p.landing3_work_altitude;
      row.vertical_target = sds.panel_depth - p.landing3_work_altitude;
      row.yaw_threshold = p.landing3_yaw_threshold;
      row.pitch_threshold = p.landing3_pitch_threshold;
      row.roll_threshold = p.landing3_roll_threshold;
      row.depth_threshold = p.landing3_depth_threshold;
      row.usbl_rate = p.landing_usbl_rate;
      row.upload = p.landing_upload;
      row.nav_mode = NavMode::Optical;
      return row;
    case Phase::Docked:
      break;
  }
  throw ContractViolation("phase_params: Docked has no parameter row");
}

double speed_decision(double r, double transit_speed, double inner_radius,
                      double outer_radius) {
  if (!(inner_radius >= 0.0) || !(inner_radius < outer_radius)) {
    throw ConfigError("speed_decision: requires 0 <= R_i < R_o");
  }
  if (r > outer_radius) return transit_speed;
  if (r > inner_radius) {
    return transit_speed * (r - inner_radius) / (outer_radius - inner_radius);
  }
  return 0.0;
}

CriterionResult docking_criterion(const Attitude& a, double depth,
                                  const CriterionThresholds& thr) {
  auto within = [](double deviation, double threshold) {
    return std::abs(deviation) <= threshold ? 1 : 0;
  };
  CriterionResult out;
  out.phi = within(wrap_angle(a.yaw - thr.desired_yaw), thr.yaw) +
            within(a.pitch - thr.desired_pitch, thr.pitch) +
            within(a.roll - thr.desired_roll, thr.roll) +
            within(depth - thr.desired_depth, thr.depth);
  out.success = out.phi == 4;
  return out;
}

FsmOutput fsm_step(const FsmState& state, const FsmInputs& in,
                   const DockingParams& p, const SdsGeometry& sds) {
  if (!(in.dt > 0.0)) throw DomainError("fsm_step: dt must be positive");
  if (is_landing(state.phase) && in.spot.visible && !in.optical_fix) {
    throw InternalFault("fsm_step: light visible in Landing but no optical fix");
  }

  FsmOutput out;
  FsmState s = state;
  s.phase_time += in.dt;
  s.t_vis = in.spot.visible ? s.t_vis + in.dt : 0.0;
  s.light_lost = in.spot.visible ? 0.0 : s.light_lost + in.dt;

  const Vec2 here = in.optical_fix ? *in.optical_fix : in.nav.horizontal();
  out.r = norm({here.x - sds.center.x, here.y - sds.center.y});
  const double yaw_err = wrap_angle(sds.yaw - in.attitude.yaw);

  auto at_work_altitude = [&](double work_altitude) {
    return std::abs(in.depth - (sds.panel_depth - work_altitude)) <= p.altitude_tolerance;
  };

  std::optional<Phase> next;
  switch (s.phase) {
    case Phase::Returning:
      if (out.r <= p.range_threshold) next = Phase::CloseToDocking;
      break;
    case Phase::CloseToDocking:
      if (in.spot.visible && s.t_vis + kEps >= p.t_vis_min) next = Phase::Landing1;
      break;
    case Phase::Landing1:
      if (s.light_lost > p.light_loss_timeout + kEps) {
        next = Phase::CloseToDocking;
        break;
      }
      if (out.r <= p.landing1.distance_threshold &&
          at_work_altitude(p.landing1.work_altitude)) {
        s.dwell += in.dt;
      } else {
        s.dwell = 0.0;
      }
      if (s.dwell + kEps >= p.dwell_time) next = Phase::Landing2;
      break;
    case Phase::Landing2:
      if (s.light_lost > p.light_loss_timeout + kEps) {
        next = Phase::CloseToDocking;
        break;
      }
      if (out.r <= p.landing2.distance_threshold &&
          std::abs(yaw_err) <= p.landing2.yaw_threshold &&
          at_work_altitude(p.landing2.work_altitude)) {
        s.dwell += in.dt;
      } else {
        s.dwell = 0.0;
      }
      if (s.dwell + kEps >= p.dwell_time) next = Phase::Landing3;
      break;
    case Phase::Landing3: {
      CriterionThresholds thr;
      thr.yaw = p.landing3_yaw_threshold;
      thr.pitch = p.landing3_pitch_threshold;
      thr.roll = p.landing3_roll_threshold;
      thr.depth = p.landing3_depth_threshold;
      thr.desired_yaw = sds.yaw;
      thr.desired_depth = sds.panel_depth - p.landing3_work_altitude;
      const CriterionResult c = docking_criterion(in.attitude, in.depth, thr);
      out.phi = c.phi;
      if (c.success) {
        next = Phase::Docked;
      } else if (s.phase_time + kEps >= p.settle_timeout) {
        next = Phase::Landing2;
      }
      break;
    }
    case Phase::Docked:
      break;
  }

  if (next) {
    out.transitioned_from = s.phase;
    s.phase = *next;
    s.phase_time = 0.0;
    s.dwell = 0.0;
    s.light_lost = 0.0;
    if (s.phase == Phase::Landing3) ++s.criterion_attempts;
  }

  const Vec2 c = sds.center;
  switch (s.phase) {
    case Phase::Returning:
      out.behaviours = {Waypoint{c.x, c.y, std::nullopt, 0.0},
                        ConstantSpeed{p.returning_speed},
                        ConstantAltitude{p.returning_altitude}};
      break;
    case Phase::CloseToDocking:
      out.behaviours = {Waypoint{c.x, c.y, std::nullopt, 0.0},
                        ConstantSpeed{p.close_speed},
                        ConstantDepth{sds.panel_depth - p.close_altitude}};
      break;
    case Phase::Landing1:
    case Phase::Landing2: {
      const RingParams& ring = s.phase == Phase::Landing1 ? p.landing1 : p.landing2;
      const double v = speed_decision(out.r, ring.transit_speed, ring.inner_radius,
                                      ring.outer_radius);
      out.decided_speed = v;
      out.behaviours = {
          Waypoint{c.x, c.y, sds.yaw, ring.inner_radius + p.capture_margin},
          ConstantSpeed{v}, ConstantDepth{sds.panel_depth - ring.work_altitude}};
      break;
    }
    case Phase::Landing3:
      out.behaviours = {
          Waypoint{c.x, c.y, sds.yaw, std::numeric_limits<double>::infinity()},
          ConstantSpeed{0.0},
          ConstantDepth{sds.panel_depth - p.landing3_work_altitude}};
      break;
    case Phase::Docked:
      break;
  }
  out.state = s;
  return out;
}

}  // namespace auh
