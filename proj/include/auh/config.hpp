#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "auh/control.hpp"
#include "auh/fsm.hpp"
#include "auh/optical.hpp"
#include "auh/plant.hpp"
#include "auh/sensors.hpp"

namespace auh {

struct StartConfig {
  Pose pose{-18.0, -12.0, 23.0, 0.0, 0.0, 0.0};
  // > 0: place the vehicle at this range from the SDS on a seeded random
  // bearing with a seeded random heading (pose.x/y/yaw ignored).
  double random_range = 0.0;
};

struct ScenarioConfig {
  SdsGeometry sds;
  StartConfig start;
  CameraParams camera;
  PlantParams plant;
  CurrentField current;
  SensorNoise noise;
  double noise_scale = 1.0;
  NavParams nav;
  UsblLinkParams usbl;
  DockingParams docking;
  ControllerBank controllers = default_controllers();
  double dt = 0.1;
  double max_duration = 1800.0;
  std::uint64_t seed = 1;
  double batch_success_floor = 0.95;

  LightPosition light() const { return {sds.center.x, sds.center.y, sds.panel_depth}; }
  SensorNoise effective_noise() const { return noise.scaled(noise_scale); }

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

class ScenarioLoadError : public ConfigError {
 public:
  ScenarioLoadError(const std::string& message, std::string key, int line)
      : ConfigError(message), key_(std::move(key)), line_(line) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

/// Every recognised key, in dump order.
std::vector<std::string> scenario_keys();

/// Parses `key = value` lines ('#' starts a comment) over the defaults and
/// validates the result. Unknown keys and bad values are reported with their
/// line number.
ScenarioConfig parse_scenario(std::string_view text);

ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Renders the configuration in the same format parse_scenario reads.
std::string dump_scenario(const ScenarioConfig& config);

}  // namespace auh
