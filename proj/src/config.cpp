#include "auh/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>

namespace auh {

namespace {

using DoubleRef = double& (*)(ScenarioConfig&);
using IntRef = int& (*)(ScenarioConfig&);
using BoolRef = bool& (*)(ScenarioConfig&);
using SeedRef = std::uint64_t& (*)(ScenarioConfig&);
using FieldRef = std::variant<DoubleRef, IntRef, BoolRef, SeedRef>;

struct Field {
  const char* key;
  FieldRef ref;
};

#define AUH_FIELD(key, expr) \
  Field { key, +[](ScenarioConfig& c) -> decltype(auto) { return (expr); } }

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      AUH_FIELD("sds.x", c.sds.center.x),
      AUH_FIELD("sds.y", c.sds.center.y),
      AUH_FIELD("sds.panel_depth", c.sds.panel_depth),
      AUH_FIELD("sds.seafloor_depth", c.sds.seafloor_depth),
      AUH_FIELD("sds.footprint_half_width", c.sds.footprint_half_width),
      AUH_FIELD("sds.yaw", c.sds.yaw),

      AUH_FIELD("start.x", c.start.pose.x),
      AUH_FIELD("start.y", c.start.pose.y),
      AUH_FIELD("start.z", c.start.pose.z),
      AUH_FIELD("start.yaw", c.start.pose.yaw),
      AUH_FIELD("start.random_range", c.start.random_range),

      AUH_FIELD("camera.width_px", c.camera.width_px),
      AUH_FIELD("camera.height_px", c.camera.height_px),
      AUH_FIELD("camera.half_fov_h", c.camera.half_fov_h),
      AUH_FIELD("camera.half_fov_v", c.camera.half_fov_v),
      AUH_FIELD("camera.divergence", c.camera.divergence),
      AUH_FIELD("camera.offset", c.camera.offset),
      AUH_FIELD("camera.pixel_noise", c.camera.pixel_noise),

      AUH_FIELD("plant.mass", c.plant.mass),
      AUH_FIELD("plant.surge_inertia", c.plant.surge_inertia),
      AUH_FIELD("plant.heave_inertia", c.plant.heave_inertia),
      AUH_FIELD("plant.yaw_inertia", c.plant.yaw_inertia),
      AUH_FIELD("plant.surge_drag", c.plant.surge_drag),
      AUH_FIELD("plant.heave_drag", c.plant.heave_drag),
      AUH_FIELD("plant.yaw_drag", c.plant.yaw_drag),
      AUH_FIELD("plant.max_surge_thrust", c.plant.max_surge_thrust),
      AUH_FIELD("plant.max_heave_thrust", c.plant.max_heave_thrust),
      AUH_FIELD("plant.max_yaw_torque", c.plant.max_yaw_torque),
      AUH_FIELD("plant.u_max", c.plant.u_max),
      AUH_FIELD("plant.w_max", c.plant.w_max),
      AUH_FIELD("plant.r_max", c.plant.r_max),
      AUH_FIELD("plant.attitude_time_constant", c.plant.attitude_time_constant),
      AUH_FIELD("plant.attitude_noise", c.plant.attitude_noise),
      AUH_FIELD("plant.contact_height", c.plant.contact_height),
      AUH_FIELD("plant.funnel_radius", c.plant.funnel_radius),
      AUH_FIELD("plant.contact_tilt", c.plant.contact_tilt),

      AUH_FIELD("current.mean_x", c.current.mean_x),
      AUH_FIELD("current.mean_y", c.current.mean_y),
      AUH_FIELD("current.gust_amplitude", c.current.gust_amplitude),
      AUH_FIELD("current.gust_period", c.current.gust_period),
      AUH_FIELD("current.gust_dir_x", c.current.gust_dir_x),
      AUH_FIELD("current.gust_dir_y", c.current.gust_dir_y),

      AUH_FIELD("noise.imu_deg", c.noise.imu_deg),
      AUH_FIELD("noise.dvl_velocity", c.noise.dvl_velocity),
      AUH_FIELD("noise.depth", c.noise.depth),
      AUH_FIELD("noise.altimeter", c.noise.altimeter),
      AUH_FIELD("noise.usbl_position", c.noise.usbl_position),
      AUH_FIELD("noise.dvl_dropout", c.noise.dvl_dropout),
      AUH_FIELD("noise.scale", c.noise_scale),

      AUH_FIELD("nav.drift_per_meter", c.nav.drift_per_meter),
      AUH_FIELD("nav.drift_floor_rate", c.nav.drift_floor_rate),
      AUH_FIELD("nav.max_fix_age", c.nav.max_fix_age),
      AUH_FIELD("nav.initial_error", c.nav.initial_error),
      AUH_FIELD("nav.optical_drift", c.nav.optical_drift),

      AUH_FIELD("usbl.latency", c.usbl.latency),
      AUH_FIELD("usbl.upload_duration", c.usbl.upload_duration),

      AUH_FIELD("returning.range_threshold", c.docking.range_threshold),
      AUH_FIELD("returning.speed", c.docking.returning_speed),
      AUH_FIELD("returning.altitude", c.docking.returning_altitude),
      AUH_FIELD("returning.usbl_rate", c.docking.returning_usbl_rate),
      AUH_FIELD("returning.upload", c.docking.returning_upload),

      AUH_FIELD("close_to_docking.speed", c.docking.close_speed),
      AUH_FIELD("close_to_docking.altitude", c.docking.close_altitude),
      AUH_FIELD("close_to_docking.usbl_rate", c.docking.close_usbl_rate),
      AUH_FIELD("close_to_docking.upload", c.docking.close_upload),

      AUH_FIELD("landing1.distance_threshold", c.docking.landing1.distance_threshold),
      AUH_FIELD("landing1.work_altitude", c.docking.landing1.work_altitude),
      AUH_FIELD("landing1.transit_speed", c.docking.landing1.transit_speed),
      AUH_FIELD("landing1.outer_speed", c.docking.landing1.outer_speed),
      AUH_FIELD("landing1.outer_radius", c.docking.landing1.outer_radius),
      AUH_FIELD("landing1.inner_radius", c.docking.landing1.inner_radius),
      AUH_FIELD("landing1.yaw_threshold", c.docking.landing1.yaw_threshold),

      AUH_FIELD("landing2.distance_threshold", c.docking.landing2.distance_threshold),
      AUH_FIELD("landing2.work_altitude", c.docking.landing2.work_altitude),
      AUH_FIELD("landing2.transit_speed", c.docking.landing2.transit_speed),
      AUH_FIELD("landing2.outer_speed", c.docking.landing2.outer_speed),
      AUH_FIELD("landing2.outer_radius", c.docking.landing2.outer_radius),
      AUH_FIELD("landing2.inner_radius", c.docking.landing2.inner_radius),
      AUH_FIELD("landing2.yaw_threshold", c.docking.landing2.yaw_threshold),

      AUH_FIELD("landing3.work_altitude", c.docking.landing3_work_altitude),
      AUH_FIELD("landing3.yaw_threshold", c.docking.landing3_yaw_threshold),
      AUH_FIELD("landing3.pitch_threshold", c.docking.landing3_pitch_threshold),
      AUH_FIELD("landing3.roll_threshold", c.docking.landing3_roll_threshold),
      AUH_FIELD("landing3.depth_threshold", c.docking.landing3_depth_threshold),

      AUH_FIELD("landing.usbl_rate", c.docking.landing_usbl_rate),
      AUH_FIELD("landing.upload", c.docking.landing_upload),
      AUH_FIELD("landing.altitude_tolerance", c.docking.altitude_tolerance),
      AUH_FIELD("landing.capture_margin", c.docking.capture_margin),

      AUH_FIELD("timers.t_vis_min", c.docking.t_vis_min),
      AUH_FIELD("timers.dwell_time", c.docking.dwell_time),
      AUH_FIELD("timers.light_loss_timeout", c.docking.light_loss_timeout),
      AUH_FIELD("timers.settle_timeout", c.docking.settle_timeout),

      AUH_FIELD("pid.yaw.kp", c.controllers.yaw.gains.kp),
      AUH_FIELD("pid.yaw.ki", c.controllers.yaw.gains.ki),
      AUH_FIELD("pid.yaw.kd", c.controllers.yaw.gains.kd),
      AUH_FIELD("pid.yaw.output_limit", c.controllers.yaw.gains.output_limit),
      AUH_FIELD("pid.yaw.integral_limit", c.controllers.yaw.gains.integral_limit),
      AUH_FIELD("pid.yaw.derivative_smoothing", c.controllers.yaw.gains.derivative_smoothing),
      AUH_FIELD("pid.speed.kp", c.controllers.speed.gains.kp),
      AUH_FIELD("pid.speed.ki", c.controllers.speed.gains.ki),
      AUH_FIELD("pid.speed.kd", c.controllers.speed.gains.kd),
      AUH_FIELD("pid.speed.output_limit", c.controllers.speed.gains.output_limit),
      AUH_FIELD("pid.speed.integral_limit", c.controllers.speed.gains.integral_limit),
      AUH_FIELD("pid.speed.derivative_smoothing", c.controllers.speed.gains.derivative_smoothing),
      AUH_FIELD("pid.depth.kp", c.controllers.depth.gains.kp),
      AUH_FIELD("pid.depth.ki", c.controllers.depth.gains.ki),
      AUH_FIELD("pid.depth.kd", c.controllers.depth.gains.kd),
      AUH_FIELD("pid.depth.output_limit", c.controllers.depth.gains.output_limit),
      AUH_FIELD("pid.depth.integral_limit", c.controllers.depth.gains.integral_limit),
      AUH_FIELD("pid.depth.derivative_smoothing", c.controllers.depth.gains.derivative_smoothing),

      AUH_FIELD("sim.dt", c.dt),
      AUH_FIELD("sim.max_duration", c.max_duration),
      AUH_FIELD("sim.seed", c.seed),
      AUH_FIELD("batch.success_floor", c.batch_success_floor),
  };
  return table;
}

#undef AUH_FIELD

// Shorthands that write the same value to both optical-ring phases.
const std::map<std::string, std::vector<std::string>, std::less<>>& aliases() {
  static const std::map<std::string, std::vector<std::string>, std::less<>> table = {
      {"ring.inner", {"landing1.inner_radius", "landing2.inner_radius"}},
      {"ring.outer", {"landing1.outer_radius", "landing2.outer_radius"}},
      {"ring.transit_speed", {"landing1.transit_speed", "landing2.transit_speed"}},
      {"ring.outer_speed", {"landing1.outer_speed", "landing2.outer_speed"}},
  };
  return table;
}

const Field* find_field(std::string_view key) {
  for (const Field& f : fields()) {
    if (key == f.key) return &f;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

// Returns false when `text` does not parse as the field's type.
bool assign(const Field& f, ScenarioConfig& c, std::string_view text) {
  return std::visit(
      [&](auto ref) -> bool {
        auto& slot = ref(c);
        using T = std::remove_reference_t<decltype(slot)>;
        if constexpr (std::is_same_v<T, bool>) {
          if (text == "true" || text == "yes" || text == "1") {
            slot = true;
          } else if (text == "false" || text == "no" || text == "0") {
            slot = false;
          } else {
            return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, double>) {
          double v = 0.0;
          if (!parse_number(text, v) || !std::isfinite(v)) return false;
          slot = v;
          return true;
        } else {
          T v{};
          if (!parse_number(text, v)) return false;
          slot = v;
          return true;
        }
      },
      f.ref);
}

std::string render(const Field& f, const ScenarioConfig& config) {
  ScenarioConfig copy = config;
  return std::visit(
      [&](auto ref) -> std::string {
        const auto& slot = ref(copy);
        using T = std::remove_cvref_t<decltype(slot)>;
        if constexpr (std::is_same_v<T, bool>) {
          return slot ? "true" : "false";
        } else if constexpr (std::is_same_v<T, double>) {
          // Shortest form that round-trips, in plain notation where it fits.
          char buf[64];
          const auto res = std::to_chars(buf, buf + sizeof buf, slot);
          return std::string(buf, res.ptr);
        } else {
          return std::to_string(slot);
        }
      },
      f.ref);
}

}  // namespace

void ScenarioConfig::validate() const {
  if (!(dt > 0.0 && dt <= 0.5)) throw ConfigError("sim.dt must lie in (0, 0.5]", "sim.dt");
  if (!(max_duration > 0.0)) {
    throw ConfigError("sim.max_duration must be positive", "sim.max_duration");
  }
  if (!(sds.panel_depth > 0.0)) {
    throw ConfigError("sds.panel_depth must be positive", "sds.panel_depth");
  }
  if (!(sds.seafloor_depth >= sds.panel_depth)) {
    throw ConfigError("sds.seafloor_depth must not be shallower than the panel",
                      "sds.seafloor_depth");
  }
  if (!(sds.footprint_half_width > 0.0)) {
    throw ConfigError("sds.footprint_half_width must be positive", "sds.footprint_half_width");
  }
  if (!(start.pose.z >= 0.0 && start.pose.z < sds.seafloor_depth)) {
    throw ConfigError("start.z must lie between the surface and the seafloor", "start.z");
  }
  if (!(start.random_range >= 0.0)) {
    throw ConfigError("start.random_range must be non-negative", "start.random_range");
  }
  if (!(noise_scale >= 0.0)) throw ConfigError("noise.scale must be non-negative", "noise.scale");
  if (!(batch_success_floor >= 0.0 && batch_success_floor <= 1.0)) {
    throw ConfigError("batch.success_floor must lie in [0, 1]", "batch.success_floor");
  }
  if (!(usbl.latency >= 0.0)) throw ConfigError("usbl.latency must be non-negative", "usbl.latency");
  if (!(usbl.upload_duration >= 0.0)) {
    throw ConfigError("usbl.upload_duration must be non-negative", "usbl.upload_duration");
  }
  const std::pair<const char*, const PidState*> loops[] = {
      {"pid.yaw", &controllers.yaw}, {"pid.speed", &controllers.speed},
      {"pid.depth", &controllers.depth}};
  for (const auto& [name, pid] : loops) {
    const PidGains& g = pid->gains;
    const std::string n(name);
    if (g.kp < 0 || g.ki < 0 || g.kd < 0) {
      throw ConfigError(n + " gains must be non-negative", n + ".kp");
    }
    if (!(g.output_limit > 0)) {
      throw ConfigError(n + ".output_limit must be positive", n + ".output_limit");
    }
    if (!(g.integral_limit > 0)) {
      throw ConfigError(n + ".integral_limit must be positive", n + ".integral_limit");
    }
    if (!(g.derivative_smoothing >= 0 && g.derivative_smoothing < 1)) {
      throw ConfigError(n + ".derivative_smoothing must lie in [0, 1)",
                        n + ".derivative_smoothing");
    }
  }
  camera.validate();
  plant.validate();
  current.validate();
  noise.validate();
  nav.validate();
  docking.validate(sds, camera);
}

std::vector<std::string> scenario_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.emplace_back(f.key);
  return keys;
}

ScenarioConfig parse_scenario(std::string_view text) {
  ScenarioConfig config;
  std::map<std::string, int, std::less<>> set_at;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ScenarioLoadError("line " + std::to_string(line_no) + ": expected 'key = value'",
                              std::string(line), line_no);
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));

    std::vector<std::string> targets;
    if (auto a = aliases().find(key); a != aliases().end()) {
      targets = a->second;
    } else {
      targets.emplace_back(key);
    }
    for (const std::string& target : targets) {
      const Field* f = find_field(target);
      if (f == nullptr) {
        throw ScenarioLoadError(
            "line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'",
            std::string(key), line_no);
      }
      if (!assign(*f, config, value)) {
        throw ScenarioLoadError("line " + std::to_string(line_no) + ": invalid value '" +
                                    std::string(value) + "' for '" + std::string(key) + "'",
                                std::string(key), line_no);
      }
      set_at[target] = line_no;
    }
  }

  try {
    config.validate();
  } catch (const ConfigError& e) {
    const auto it = set_at.find(e.key());
    const int line = it == set_at.end() ? 0 : it->second;
    std::string where = line > 0 ? "line " + std::to_string(line) + ": " : "";
    throw ScenarioLoadError(where + e.what(), e.key(), line);
  }
  return config;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ScenarioLoadError("cannot open scenario file '" + path.string() + "'", {}, 0);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string dump_scenario(const ScenarioConfig& config) {
  std::string out;
  std::string section;
  for (const Field& f : fields()) {
    const std::string key(f.key);
    const std::string prefix = key.substr(0, key.find('.'));
    if (prefix != section) {
      if (!section.empty()) out += '\n';
      out += "# " + prefix + "\n";
      section = prefix;
    }
    out += key + " = " + render(f, config) + "\n";
  }
  return out;
}

}  // namespace auh
