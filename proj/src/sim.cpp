#include "auh/sim.hpp"

#include <algorithm>
#include <charconv>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <deque>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace auh {

namespace {

enum StreamLabel : std::uint64_t {
  kPlantStream = 1,
  kSensorStream = 2,
  kUsblStream = 3,
  kCameraStream = 4,
  kStartStream = 5,
};

struct PendingFix {
  UsblFix fix;
  double deliver_at = 0.0;
  Vec2 nav_at_emission;
};

// Shortest text that parses back to the same double, so logs round-trip.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Pose initial_pose(const ScenarioConfig& config, std::uint64_t seed) {
  Pose p = config.start.pose;
  if (config.start.random_range > 0.0) {
    Rng rng = Rng::stream(seed, kStartStream);
    const double bearing = deg2rad(rng.uniform(-180.0, 180.0));
    p.x = config.sds.center.x + config.start.random_range * std::cos(bearing);
    p.y = config.sds.center.y + config.start.random_range * std::sin(bearing);
    p.yaw = wrap_angle(rng.uniform(-180.0, 180.0));
  }
  return p;
}

bool is_landing(Phase p) {
  return p == Phase::Landing1 || p == Phase::Landing2 || p == Phase::Landing3;
}

}  // namespace

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Docked:
      return "Docked";
    case Outcome::TimedOut:
      return "TimedOut";
    case Outcome::Aborted:
      return "Aborted";
  }
  return "?";
}

RunResult run(const ScenarioConfig& config, std::uint64_t seed) {
  config.validate();
  const double dt = config.dt;
  const SdsGeometry& sds = config.sds;
  const SensorNoise noise = config.effective_noise();
  const LightPosition light = config.light();
  CameraParams camera = config.camera;
  camera.pixel_noise *= config.noise_scale;

  Rng plant_rng = Rng::stream(seed, kPlantStream);
  Rng sensor_rng = Rng::stream(seed, kSensorStream);
  Rng usbl_rng = Rng::stream(seed, kUsblStream);
  Rng camera_rng = Rng::stream(seed, kCameraStream);

  PlantState truth{initial_pose(config, seed), {}};
  NavEstimate nav;
  nav.x = truth.pose.x + sensor_rng.gaussian(config.nav.initial_error);
  nav.y = truth.pose.y + sensor_rng.gaussian(config.nav.initial_error);
  nav.yaw = truth.pose.yaw;
  nav.drift = config.nav.initial_error;

  FsmState fsm;
  ControllerBank controllers = config.controllers;
  UsblLink link;
  std::deque<PendingFix> in_flight;

  RunResult result;
  const auto max_ticks = static_cast<std::int64_t>(std::ceil(config.max_duration / dt - 1e-9));
  result.records.reserve(static_cast<std::size_t>(std::min<std::int64_t>(max_ticks + 1, 1 << 20)));

  for (std::int64_t k = 0; k <= max_ticks; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Vec2 current = current_at(t, config.current);

    const ImuReading imu = sample_imu(truth.pose, t, noise.imu_deg, sensor_rng);
    const DvlReading dvl = sample_dvl(truth.pose, truth.vel, current, sds, noise, sensor_rng);
    const double depth = sample_depth(truth.pose, noise.depth, sensor_rng);
    const AltimeterReading altimeter =
        sample_altimeter(truth.pose, sds, noise.altimeter, sensor_rng);

    if (k > 0) {
      nav = dead_reckon(nav, imu, dvl, dt, config.nav);
    } else {
      nav.yaw = imu.yaw;
    }

    const PhaseParams row = phase_params(
        fsm.phase == Phase::Docked ? Phase::Landing3 : fsm.phase, config.docking, sds);
    if (auto fix = usbl_poll(t, row.usbl_rate, row.upload, link, truth.pose,
                             noise.usbl_position, config.usbl, usbl_rng)) {
      result.events.push_back(
          {t, "usbl_fix",
           "x=" + fmt(fix->x) + " y=" + fmt(fix->y) + " z=" + fmt(fix->z) +
               " latency=" + fmt(fix->latency) +
               " upload=" + (fix->carries_upload ? "1" : "0")});
      in_flight.push_back({*fix, t + fix->latency, nav.horizontal()});
    }
    while (!in_flight.empty() && in_flight.front().deliver_at <= t + 1e-9) {
      PendingFix p = in_flight.front();
      in_flight.pop_front();
      // Shift the fix by the dead-reckoned motion since it was taken.
      p.fix.x += nav.x - p.nav_at_emission.x;
      p.fix.y += nav.y - p.nav_at_emission.y;
      nav = usbl_correct(nav, p.fix, t, noise.usbl_position, config.nav);
    }

    const SpotObservation spot =
        add_pixel_noise(project_spot(truth.pose, light, config.camera), camera, camera_rng);
    std::optional<Vec2> optical_fix;
    if (spot.visible) {
      SpotObservation measured = spot;
      measured.h = light.z - depth;
      if (measured.h > 0.0) {
        optical_fix = locate_vehicle(measured, imu.yaw, config.camera, light);
      }
    }
    if (optical_fix && is_landing(fsm.phase)) {
      nav.x = optical_fix->x;
      nav.y = optical_fix->y;
      nav.drift = config.nav.optical_drift;
    }

    FsmInputs in;
    in.nav = nav;
    in.spot = spot;
    in.spot.visible = spot.visible && optical_fix.has_value();
    in.optical_fix = optical_fix;
    in.depth = depth;
    in.attitude = {imu.roll, imu.pitch, imu.yaw};
    in.dt = dt;
    const FsmOutput step = fsm_step(fsm, in, config.docking, sds);
    if (step.transitioned_from) {
      result.events.push_back({t, "transition",
                               std::string(phase_name(*step.transitioned_from)) + "->" +
                                   std::string(phase_name(step.state.phase))});
      if (is_landing(step.state.phase) && !is_landing(*step.transitioned_from)) {
        if (optical_fix) {
          nav.x = optical_fix->x;
          nav.y = optical_fix->y;
          nav.drift = config.nav.optical_drift;
        }
      }
    }
    fsm = step.state;

    const HelmOutput helm = helm_resolve(step.behaviours, nav, altimeter, depth);
    if (helm.altitude_fault) {
      result.events.push_back({t, "helm_fault", "ConstantAltitude while altimeter occluded"});
    }
    const double speed = dvl.valid ? dvl.u : nav.last_u;
    const ControlResult control =
        control_step(helm.setpoints, imu.yaw, speed, depth, controllers, dt);
    controllers = control.controllers;

    TrajectoryRecord rec;
    rec.t = t;
    rec.phase = fsm.phase;
    rec.truth = truth.pose;
    rec.nav = nav;
    rec.visible = in.spot.visible;
    rec.optical_fix = optical_fix;
    rec.altimeter = altimeter;
    rec.setpoints = helm.setpoints;
    rec.command = control.command;
    rec.r = step.r;
    rec.decided_speed = step.decided_speed;
    rec.phi = step.phi;
    result.records.push_back(rec);

    if (fsm.phase == Phase::Docked) break;

    truth = plant_step(truth.pose, truth.vel, control.command, current, dt,
                       config.plant, plant_rng);
    truth = settle_on_panel(truth, sds, config.plant);
    if (!is_finite(truth.pose) || !std::isfinite(truth.vel.u) ||
        !std::isfinite(truth.vel.w) || !std::isfinite(truth.vel.r_yaw)) {
      TrajectoryRecord diag = rec;
      diag.t = t + dt;
      diag.truth = truth.pose;
      result.records.push_back(diag);
      result.events.push_back({t + dt, "abort", "non-finite vehicle state"});
      break;
    }
  }

  result.metrics = summarize(result.records, config);
  return result;
}

RunMetrics summarize(const std::vector<TrajectoryRecord>& records,
                     const ScenarioConfig& config) {
  if (records.empty()) throw std::invalid_argument("summarize: no records");
  RunMetrics m;
  const TrajectoryRecord& last = records.back();
  if (last.phase == Phase::Docked) {
    m.outcome = Outcome::Docked;
  } else if (!is_finite(last.truth)) {
    m.outcome = Outcome::Aborted;
  } else {
    m.outcome = Outcome::TimedOut;
  }
  m.total_time = last.t - records.front().t;
  for (std::size_t i = 0; i + 1 < records.size(); ++i) {
    m.phase_time[phase_index(records[i].phase)] += records[i + 1].t - records[i].t;
    const Phase from = records[i].phase;
    const Phase to = records[i + 1].phase;
    if (from != to) {
      ++m.transitions;
      if (from == Phase::Landing3 && to == Phase::Landing2) ++m.regressions;
      if (is_landing(from) && to == Phase::CloseToDocking) ++m.light_loss_fallbacks;
    }
  }
  m.final_offset = std::hypot(last.truth.x - config.sds.center.x,
                              last.truth.y - config.sds.center.y);
  m.final_yaw_error = std::isfinite(last.truth.yaw)
                          ? std::abs(wrap_angle(config.sds.yaw - last.truth.yaw))
                          : last.truth.yaw;

  // Mean truth altitude above the panel over the final dwell window of the
  // last visit to each optical hover phase.
  auto hover = [&](Phase phase) -> std::optional<double> {
    std::size_t end = records.size();
    while (end > 0 && records[end - 1].phase != phase) --end;
    if (end == 0) return std::nullopt;
    const double t_end = records[end - 1].t;
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = end; i-- > 0 && records[i].phase == phase;) {
      if (t_end - records[i].t > config.docking.dwell_time + 1e-9) break;
      sum += config.sds.panel_depth - records[i].truth.z;
      ++n;
    }
    return sum / n;
  };
  m.landing1_hover_altitude = hover(Phase::Landing1);
  m.landing2_hover_altitude = hover(Phase::Landing2);
  return m;
}

const std::vector<std::string>& log_columns() {
  static const std::vector<std::string> cols = {
      "t",         "phase",     "x",          "y",          "z",
      "roll",      "pitch",     "yaw",        "nav_x",      "nav_y",
      "nav_yaw",   "nav_drift", "visible",    "optical_x",  "optical_y",
      "altimeter", "occluded",  "sp_yaw",     "sp_speed",   "sp_depth",
      "fx",        "fz",        "tz",         "r",          "decided_speed",
      "phi"};
  return cols;
}

namespace {

std::string format_record(const TrajectoryRecord& r) {
  std::string s;
  auto add = [&s](const std::string& v) {
    if (!s.empty()) s += ',';
    s += v;
  };
  add(fmt(r.t));
  add(std::string(phase_name(r.phase)));
  add(fmt(r.truth.x));
  add(fmt(r.truth.y));
  add(fmt(r.truth.z));
  add(fmt(r.truth.roll));
  add(fmt(r.truth.pitch));
  add(fmt(r.truth.yaw));
  add(fmt(r.nav.x));
  add(fmt(r.nav.y));
  add(fmt(r.nav.yaw));
  add(fmt(r.nav.drift));
  add(r.visible ? "1" : "0");
  add(r.optical_fix ? fmt(r.optical_fix->x) : "");
  add(r.optical_fix ? fmt(r.optical_fix->y) : "");
  add(fmt(r.altimeter.altitude));
  add(r.altimeter.occluded ? "1" : "0");
  add(r.setpoints.yaw_active ? fmt(r.setpoints.yaw) : "");
  add(r.setpoints.speed_active ? fmt(r.setpoints.speed) : "");
  add(r.setpoints.depth_active ? fmt(r.setpoints.depth) : "");
  add(fmt(r.command.fx));
  add(fmt(r.command.fz));
  add(fmt(r.command.tz));
  add(fmt(r.r));
  add(r.decided_speed ? fmt(*r.decided_speed) : "");
  add(r.phi ? std::to_string(*r.phi) : "");
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s) { return std::stod(s); }

}  // namespace

void write_log(const RunResult& result, const std::filesystem::path& path) {
  if (result.records.empty()) throw std::invalid_argument("write_log: no records");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write log '" + path.string() + "'");
  const auto& cols = log_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  std::size_t e = 0;
  for (const TrajectoryRecord& r : result.records) {
    while (e < result.events.size() && result.events[e].t <= r.t + 1e-9) {
      const LogEvent& ev = result.events[e++];
      out << "#event," << fmt(ev.t) << ',' << ev.kind << ',' << ev.detail << '\n';
    }
    out << format_record(r) << '\n';
  }
  for (; e < result.events.size(); ++e) {
    const LogEvent& ev = result.events[e];
    out << "#event," << fmt(ev.t) << ',' << ev.kind << ',' << ev.detail << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

ParsedLog read_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read log '" + path.string() + "'");
  ParsedLog log;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split_csv(line);
    if (cells[0] == "#event") {
      LogEvent ev;
      ev.t = to_double(cells.at(1));
      ev.kind = cells.at(2);
      // Detail may itself contain commas; rejoin.
      for (std::size_t i = 3; i < cells.size(); ++i) {
        ev.detail += (i > 3 ? "," : "") + cells[i];
      }
      log.events.push_back(ev);
      continue;
    }
    if (cells.size() != log_columns().size()) {
      throw std::runtime_error("malformed log row: " + line);
    }
    TrajectoryRecord r;
    std::size_t i = 0;
    r.t = to_double(cells[i++]);
    r.phase = parse_phase(cells[i++]).value();
    r.truth.x = to_double(cells[i++]);
    r.truth.y = to_double(cells[i++]);
    r.truth.z = to_double(cells[i++]);
    r.truth.roll = to_double(cells[i++]);
    r.truth.pitch = to_double(cells[i++]);
    r.truth.yaw = to_double(cells[i++]);
    r.nav.x = to_double(cells[i++]);
    r.nav.y = to_double(cells[i++]);
    r.nav.yaw = to_double(cells[i++]);
    r.nav.drift = to_double(cells[i++]);
    r.visible = cells[i++] == "1";
    const std::string ox = cells[i++];
    const std::string oy = cells[i++];
    if (!ox.empty()) r.optical_fix = Vec2{to_double(ox), to_double(oy)};
    r.altimeter.altitude = to_double(cells[i++]);
    r.altimeter.occluded = cells[i++] == "1";
    auto opt = [&](double& slot, bool& active) {
      const std::string& c = cells[i++];
      active = !c.empty();
      if (active) slot = to_double(c);
    };
    opt(r.setpoints.yaw, r.setpoints.yaw_active);
    opt(r.setpoints.speed, r.setpoints.speed_active);
    opt(r.setpoints.depth, r.setpoints.depth_active);
    r.command.fx = to_double(cells[i++]);
    r.command.fz = to_double(cells[i++]);
    r.command.tz = to_double(cells[i++]);
    r.r = to_double(cells[i++]);
    if (!cells[i].empty()) r.decided_speed = to_double(cells[i]);
    ++i;
    if (!cells[i].empty()) r.phi = std::stoi(cells[i]);
    log.records.push_back(r);
  }
  return log;
}

std::string format_metrics(const RunMetrics& m) {
  std::ostringstream out;
  auto line = [&out](const std::string& key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  auto opt = [](const std::optional<double>& v) {
    return v ? fmt17(*v) : std::string("none");
  };
  line("outcome", std::string(outcome_name(m.outcome)));
  line("total_time", fmt17(m.total_time));
  for (int i = 0; i < 6; ++i) {
    line("time." + std::string(phase_name(static_cast<Phase>(i))), fmt17(m.phase_time[i]));
  }
  line("final_offset", fmt17(m.final_offset));
  line("final_yaw_error", fmt17(m.final_yaw_error));
  line("regressions", std::to_string(m.regressions));
  line("light_loss_fallbacks", std::to_string(m.light_loss_fallbacks));
  line("transitions", std::to_string(m.transitions));
  line("landing1_hover_altitude", opt(m.landing1_hover_altitude));
  line("landing2_hover_altitude", opt(m.landing2_hover_altitude));
  return out.str();
}

BatchResult run_batch(const ScenarioConfig& config, std::uint64_t first_seed,
                      int count, unsigned threads) {
  config.validate();
  BatchResult batch;
  if (count <= 0) return batch;
  batch.seeds.resize(static_cast<std::size_t>(count));
  batch.metrics.resize(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) batch.seeds[i] = first_seed + static_cast<std::uint64_t>(i);

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(count));
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          batch.metrics[i] = run(config, batch.seeds[i]).metrics;
        } catch (...) {
          // Stop handing out work and surface the failure on the caller.
          next = count;
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  batch.docked = static_cast<int>(std::count_if(
      batch.metrics.begin(), batch.metrics.end(),
      [](const RunMetrics& m) { return m.outcome == Outcome::Docked; }));
  return batch;
}

}  // namespace auh
