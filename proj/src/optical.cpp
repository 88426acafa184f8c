#include "auh/optical.hpp"

#include <algorithm>
#include <cmath>

namespace auh {

void CameraParams::validate() const {
  if (width_px <= 0) throw ConfigError("camera.width_px must be positive", "camera.width_px");
  if (height_px <= 0) throw ConfigError("camera.height_px must be positive", "camera.height_px");
  if (!(half_fov_h > 0 && half_fov_h < 90)) {
    throw ConfigError("camera.half_fov_h must lie in (0, 90) deg", "camera.half_fov_h");
  }
  if (!(half_fov_v > 0 && half_fov_v < 90)) {
    throw ConfigError("camera.half_fov_v must lie in (0, 90) deg", "camera.half_fov_v");
  }
  if (!(divergence > 0 && divergence < 180)) {
    throw ConfigError("camera.divergence must lie in (0, 180) deg", "camera.divergence");
  }
  if (offset < 0) throw ConfigError("camera.offset must be non-negative", "camera.offset");
  if (pixel_noise < 0) {
    throw ConfigError("camera.pixel_noise must be non-negative", "camera.pixel_noise");
  }
}

double effective_radius(double h, double divergence_deg) {
  return std::tan(deg2rad(divergence_deg) / 2.0) * h;
}

SpotObservation project_spot(const Pose& vehicle, const LightPosition& light,
                             const CameraParams& cam) {
  SpotObservation obs;
  obs.h = light.z - vehicle.z;
  if (!(obs.h > 0.0)) return obs;

  const Vec2 rel{light.x - vehicle.x, light.y - vehicle.y};
  if (norm(rel) > effective_radius(obs.h, cam.divergence)) return obs;

  const Vec2 body = rotate_earth_to_body(rel, vehicle.yaw);
  const Vec2 camera{body.x, body.y + cam.offset};
  const double tan_alpha = camera.y / obs.h;
  const double tan_beta = camera.x / obs.h;
  const double tan_a0 = std::tan(deg2rad(cam.half_fov_h));
  const double tan_b0 = std::tan(deg2rad(cam.half_fov_v));
  if (std::abs(tan_alpha) > tan_a0 || std::abs(tan_beta) > tan_b0) return obs;

  obs.u = 0.5 * cam.width_px * tan_alpha / tan_a0;
  obs.v = 0.5 * cam.height_px * tan_beta / tan_b0;
  obs.visible = true;
  return obs;
}

SpotObservation add_pixel_noise(SpotObservation obs, const CameraParams& cam,
                                Rng& rng) {
  if (!obs.visible || cam.pixel_noise == 0.0) return obs;
  const double hu = 0.5 * cam.width_px;
  const double hv = 0.5 * cam.height_px;
  obs.u = std::clamp(obs.u + rng.gaussian(cam.pixel_noise), -hu, hu);
  obs.v = std::clamp(obs.v + rng.gaussian(cam.pixel_noise), -hv, hv);
  return obs;
}

DeviationAngles deviation_angles(double u, double v, const CameraParams& cam) {
  if (!std::isfinite(u) || !std::isfinite(v) ||
      std::abs(u) > 0.5 * cam.width_px || std::abs(v) > 0.5 * cam.height_px) {
    throw DomainError("deviation_angles: spot outside the image");
  }
  const double alpha =
      std::atan(2.0 * u / cam.width_px * std::tan(deg2rad(cam.half_fov_h)));
  const double beta =
      std::atan(2.0 * v / cam.height_px * std::tan(deg2rad(cam.half_fov_v)));
  return {rad2deg(alpha), rad2deg(beta)};
}

Vec2 camera_coords(DeviationAngles angles, double h) {
  return {h * std::tan(deg2rad(angles.beta)), h * std::tan(deg2rad(angles.alpha))};
}

Vec2 body_coords(Vec2 camera, double offset) {
  return {camera.x, camera.y - offset};
}

Vec2 earth_position(Vec2 body, double yaw_deg) {
  const Vec2 r = rotate_body_to_earth(body, yaw_deg);
  return {-r.x, -r.y};
}

Vec2 locate_vehicle(const SpotObservation& obs, double yaw_deg,
                    const CameraParams& cam, const LightPosition& light) {
  const DeviationAngles a = deviation_angles(obs.u, obs.v, cam);
  const Vec2 rel = earth_position(body_coords(camera_coords(a, obs.h), cam.offset),
                                  yaw_deg);
  return {light.x + rel.x, light.y + rel.y};
}

}  // namespace auh
