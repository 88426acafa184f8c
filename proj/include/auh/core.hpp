#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace auh {

// Raised when an operation receives input outside its mathematical domain
// (non-finite angles, non-positive time steps, out-of-sensor pixels).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised for invalid scenario/configuration values. `key` names the
// offending scenario key when one is known.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message, std::string key = {})
      : std::runtime_error(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// Raised when a caller breaks an interface contract (e.g. asking for the
// parameters of the terminal phase).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

// Earth-fixed frame: origin at the SDS center, x north, y east, z depth
// (positive down). Angles in degrees, yaw clockwise from north.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;

  Vec2 horizontal() const { return {x, y}; }
};

// Body-frame rates: surge (m/s), heave (m/s, positive down), yaw rate (deg/s).
struct BodyVelocity {
  double u = 0.0;
  double w = 0.0;
  double r_yaw = 0.0;
};

// Normalized thrusts/torque, each in [-1, 1].
struct ActuatorCommand {
  double fx = 0.0;
  double fz = 0.0;
  double tz = 0.0;

  static ActuatorCommand clamped(double fx, double fz, double tz);
};

// Roll, pitch, yaw in degrees.
struct Attitude {
  double roll = 0.0;
  double pitch = 0.0;
  double yaw = 0.0;
};

constexpr double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double rad2deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Maps any finite angle to the equivalent value in (-180, 180].
/// Throws DomainError for NaN/inf.
double wrap_angle(double deg);

/// Standard 2-D rotation of a body-frame vector by yaw (degrees) into the
/// earth frame.
Vec2 rotate_body_to_earth(Vec2 body, double yaw_deg);

/// Inverse of rotate_body_to_earth.
Vec2 rotate_earth_to_body(Vec2 earth, double yaw_deg);

/// Bearing (degrees, north-referenced) from `from` to `to`.
double bearing_deg(Vec2 from, Vec2 to);

bool is_finite(const Pose& p);

}  // namespace auh
