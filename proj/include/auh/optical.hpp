#pragma once

#include "auh/core.hpp"
#include "auh/rng.hpp"

namespace auh {

// Monocular camera looking straight down, mounted `offset` metres from the
// vehicle center, paired with the SDS guide light.
struct CameraParams {
  int width_px = 1920;           // M
  int height_px = 1080;          // N
  double half_fov_h = 35.0;      // alpha0, deg
  double half_fov_v = 35.0;      // beta0, deg
  double divergence = 70.0;      // rho, deg
  double offset = 0.5;           // L, m
  double pixel_noise = 2.0;      // px, sigma of synthesized spot centers

  void validate() const;
};

// Guide light position in the earth frame; z is depth.
struct LightPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

// Spot center relative to the optic center (pixels, signed) and the depth
// difference camera-to-light.
struct SpotObservation {
  double u = 0.0;
  double v = 0.0;
  bool visible = false;
  double h = 0.0;
};

struct DeviationAngles {
  double alpha = 0.0;  // horizontal plane, deg
  double beta = 0.0;   // vertical plane, deg
};

/// Horizontal radius of the illumination cone at height h:
/// R = tan(rho / 2) * h.
double effective_radius(double h, double divergence_deg);

/// Forward camera model: synthesizes the spot the camera would see from
/// `vehicle`. Not visible when the light is at/above the camera plane, when
/// the vehicle is outside the illumination cone, or when the spot falls off
/// the sensor.
SpotObservation project_spot(const Pose& vehicle, const LightPosition& light,
                             const CameraParams& cam);

/// Adds pixel noise to a visible observation, clamped to the sensor.
SpotObservation add_pixel_noise(SpotObservation obs, const CameraParams& cam,
                                Rng& rng);

/// Pixel offsets to deviation angles:
///   alpha = atan(2u/M * tan(alpha0)),  beta = atan(2v/N * tan(beta0)).
/// Throws DomainError if the pixel lies outside the image.
DeviationAngles deviation_angles(double u, double v, const CameraParams& cam);

/// Light position in the camera frame: (h tan(beta), h tan(alpha)).
Vec2 camera_coords(DeviationAngles angles, double h);

/// Shifts camera-frame coordinates to the body frame: (x_C, y_C - L).
Vec2 body_coords(Vec2 camera, double offset);

/// Vehicle position relative to the light, in the earth frame:
/// -R(yaw) * body.
Vec2 earth_position(Vec2 body, double yaw_deg);

/// Full chain from a visible observation back to the vehicle's earth-frame
/// horizontal position. `h` is taken from the observation.
Vec2 locate_vehicle(const SpotObservation& obs, double yaw_deg,
                    const CameraParams& cam, const LightPosition& light);

}  // namespace auh
