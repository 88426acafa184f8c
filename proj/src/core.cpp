#include "auh/core.hpp"

#include <algorithm>

namespace auh {

ActuatorCommand ActuatorCommand::clamped(double fx, double fz, double tz) {
  return {std::clamp(fx, -1.0, 1.0), std::clamp(fz, -1.0, 1.0),
          std::clamp(tz, -1.0, 1.0)};
}

double wrap_angle(double deg) {
  if (!std::isfinite(deg)) {
    throw DomainError("wrap_angle: non-finite angle");
  }
  double r = std::fmod(deg, 360.0);
  if (r > 180.0) {
    r -= 360.0;
  } else if (r <= -180.0) {
    r += 360.0;
  }
  return r;
}

Vec2 rotate_body_to_earth(Vec2 body, double yaw_deg) {
  if (!std::isfinite(yaw_deg) || !std::isfinite(body.x) ||
      !std::isfinite(body.y)) {
    throw DomainError("rotate_body_to_earth: non-finite input");
  }
  const double c = std::cos(deg2rad(yaw_deg));
  const double s = std::sin(deg2rad(yaw_deg));
  return {c * body.x - s * body.y, s * body.x + c * body.y};
}

Vec2 rotate_earth_to_body(Vec2 earth, double yaw_deg) {
  return rotate_body_to_earth(earth, -yaw_deg);
}

double bearing_deg(Vec2 from, Vec2 to) {
  return wrap_angle(rad2deg(std::atan2(to.y - from.y, to.x - from.x)));
}

bool is_finite(const Pose& p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z) &&
         std::isfinite(p.roll) && std::isfinite(p.pitch) &&
         std::isfinite(p.yaw);
}

}  // namespace auh
