// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Independent oracles live here rather than in the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "auh/config.hpp"
#include "auh/sim.hpp"

using namespace auh;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// 1. Optical chain round-trip ------------------------------------------------
Verdict optical_round_trip() {
  const CameraParams cam;
  const LightPosition light{0.0, 0.0, 28.0};
  Rng rng(1);
  const auto t0 = Clock::now();
  double worst = 0.0;
  int n = 0;
  while (n < 1000) {
    const double h = rng.uniform(0.5, 10.0);
    const double radius = effective_radius(h, cam.divergence) * std::sqrt(rng.uniform());
    const double dir = rng.uniform(-std::numbers::pi, std::numbers::pi);
    const Pose v{radius * std::cos(dir), radius * std::sin(dir), light.z - h, 0.0, 0.0,
                 rng.uniform(-180.0, 180.0)};
    const SpotObservation obs = project_spot(v, light, cam);
    if (!obs.visible) continue;
    const Vec2 got = locate_vehicle(obs, v.yaw, cam, light);
    worst = std::max(worst, std::hypot(got.x - v.x, got.y - v.y));
    ++n;
  }
  const double elapsed = seconds_since(t0);
  return {worst < 1e-9 && elapsed < 1.0,
          "worst error " + fmt("%.3g m", worst) + ", " + fmt("%.4f s", elapsed)};
}

// 2. Effective radius --------------------------------------------------------
Verdict effective_radius_values() {
  const double r5 = effective_radius(5.0, 70.0);
  const double r35 = effective_radius(3.5, 70.0);
  return {std::abs(r5 - 3.501) <= 1e-3 && std::abs(r35 - 2.451) <= 1e-3,
          "R(5) = " + fmt("%.4f m", r5) + ", R(3.5) = " + fmt("%.4f m", r35)};
}

// 3. Speed decision law ------------------------------------------------------
Verdict speed_law() {
  const RingParams ring = DockingParams{}.landing1;
  const double vtr = ring.transit_speed;
  const double ri = ring.inner_radius;
  const double ro = ring.outer_radius;
  auto oracle = [&](double r) {
    if (r <= ri) return 0.0;
    if (r <= ro) return vtr * (r - ri) / (ro - ri);
    return vtr;
  };
  bool ok = true;
  const double at_ro = speed_decision(ro, vtr, ri, ro);
  const double above = speed_decision(std::nextafter(ro, 10.0), vtr, ri, ro);
  ok = ok && std::abs(above - at_ro) <= 1e-9;
  const double mid = speed_decision(0.9, vtr, ri, ro);
  ok = ok && std::abs(mid - 0.15) <= 1e-12;
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    const double r = 3.0 * ro * i / 9999.0;
    const double v = speed_decision(r, vtr, ri, ro);
    if (r <= ri && v != 0.0) ++mismatches;
    if (r > ro && v != vtr) ++mismatches;
    if (std::abs(v - oracle(r)) > 1e-12) ++mismatches;
  }
  ok = ok && mismatches == 0;
  return {ok, "v(0.9) = " + fmt("%.6g m/s", mid) + ", jump at R_o " +
                  fmt("%.2g", std::abs(above - at_ro)) + ", sweep mismatches " +
                  std::to_string(mismatches)};
}

// 4. Criterion -----------------------------------------------------------
int phi_oracle(const Attitude& a, double z, const CriterionThresholds& t) {
  double dyaw = std::fmod(a.yaw - t.desired_yaw, 360.0);
  if (dyaw > 180.0) dyaw -= 360.0;
  if (dyaw <= -180.0) dyaw += 360.0;
  auto in = [](double dev, double thr) { return dev >= -thr && dev <= thr; };
  return int(in(dyaw, t.yaw)) + int(in(a.pitch - t.desired_pitch, t.pitch)) +
         int(in(a.roll - t.desired_roll, t.roll)) + int(in(z - t.desired_depth, t.depth));
}

Verdict criterion() {
  const CriterionThresholds thr;
  int bad = 0;
  for (int mask = 0; mask < 16; ++mask) {
    const Attitude a{(mask & 4) ? thr.roll : 2 * thr.roll, (mask & 2) ? -thr.pitch : 2 * thr.pitch,
                     (mask & 1) ? thr.yaw : -2 * thr.yaw};
    const double z = (mask & 8) ? thr.depth : -2 * thr.depth;
    const CriterionResult c = docking_criterion(a, z, thr);
    if (c.phi != phi_oracle(a, z, thr) || c.success != (mask == 15)) ++bad;
  }
  Rng rng(4);
  auto straddle = [&rng](double t) {
    const double s = rng.uniform() < 0.5 ? -1.0 : 1.0;
    const double u = rng.uniform();
    if (u < 0.3) return s * t;
    if (u < 0.5) return s * std::nextafter(t, 0.0);
    if (u < 0.7) return s * std::nextafter(t, 1e9);
    return s * t * rng.uniform(0.8, 1.2);
  };
  int random_bad = 0;
  for (int i = 0; i < 100000; ++i) {
    CriterionThresholds t;
    t.desired_yaw = rng.uniform() < 0.5 ? 0.0 : rng.uniform(-180.0, 180.0);
    const Attitude a{straddle(t.roll), straddle(t.pitch), t.desired_yaw + straddle(t.yaw)};
    const double z = straddle(t.depth);
    const CriterionResult c = docking_criterion(a, z, t);
    const int expect = phi_oracle(a, z, t);
    if (c.phi != expect || c.success != (expect == 4)) ++random_bad;
  }
  return {bad == 0 && random_bad == 0, "16 patterns: " + std::to_string(bad) +
                                           " mismatches; 1e5 random: " +
                                           std::to_string(random_bad) + " mismatches"};
}

// 5. FSM transition table ----------------------------------------------------
Verdict fsm_edges() {
  const DockingParams p;
  const SdsGeometry sds;
  struct Edge {
    const char* name;
    FsmState state;
    FsmInputs in;
    Phase expect;
  };
  auto st = [](Phase ph, double t_vis = 0, double dwell = 0, double lost = 0,
               double phase_time = 0) {
    FsmState s;
    s.phase = ph;
    s.t_vis = t_vis;
    s.dwell = dwell;
    s.light_lost = lost;
    s.phase_time = phase_time;
    return s;
  };
  auto nav_at = [](double x, double depth) {
    FsmInputs in;
    in.nav.x = x;
    in.depth = depth;
    return in;
  };
  auto optical = [](double x, double depth, Attitude att = {}) {
    FsmInputs in;
    in.nav.x = x;
    in.depth = depth;
    in.spot.visible = true;
    in.optical_fix = Vec2{x, 0.0};
    in.attitude = att;
    return in;
  };
  const double l1 = sds.panel_depth - 5.0;
  const double l2 = sds.panel_depth - 3.5;
  const double past = 1e-9;
  FsmInputs seen = nav_at(3.0, l1);
  seen.spot.visible = true;
  const std::vector<Edge> edges = {
      {"15 m enters CloseToDocking", st(Phase::Returning), nav_at(15.0, 20), Phase::CloseToDocking},
      {"beyond 15 m keeps Returning", st(Phase::Returning), nav_at(15.0 + past, 20), Phase::Returning},
      {"light held 3 s enters Landing1", st(Phase::CloseToDocking, 2.9), seen, Phase::Landing1},
      {"light held 2.8+0.1 s waits", st(Phase::CloseToDocking, 2.8), seen, Phase::CloseToDocking},
      {"1 m dwell enters Landing2", st(Phase::Landing1, 0, 1.9), optical(1.0, l1), Phase::Landing2},
      {"beyond 1 m stays", st(Phase::Landing1, 0, 1.9), optical(1.0 + past, l1), Phase::Landing1},
      {"0.7 m and 10 deg enters Landing3", st(Phase::Landing2, 0, 1.9), optical(0.7, l2, {0, 0, 10.0}), Phase::Landing3},
      {"beyond 0.7 m stays", st(Phase::Landing2, 0, 1.9), optical(0.7 + past, l2), Phase::Landing2},
      {"12 deg stays", st(Phase::Landing2, 0, 1.9), optical(0.6, l2, {0, 0, 12.0}), Phase::Landing2},
      {"criterion on all boundaries docks", st(Phase::Landing3), nav_at(0, 28.0), Phase::Docked},
      {"light lost past timeout falls back", st(Phase::Landing1, 0, 0, 10.0), nav_at(3, l1), Phase::CloseToDocking},
      {"settle timeout regresses", st(Phase::Landing3, 0, 0, 0, 19.9), nav_at(0, 27.0), Phase::Landing2},
  };
  std::vector<Edge> all = edges;
  // Criterion thresholds at exactly 45 / 5 / 5 deg and 0.2 m pass; just
  // beyond each fails.
  Edge boundary = all[9];
  boundary.in.attitude = {5.0, -5.0, 45.0};
  all.push_back(boundary);
  for (Attitude a : {Attitude{5.01, 0, 0}, Attitude{0, 5.01, 0}, Attitude{0, 0, 45.01}}) {
    Edge e{"beyond a criterion threshold stays", st(Phase::Landing3), nav_at(0, 28.0), Phase::Landing3};
    e.in.attitude = a;
    all.push_back(e);
  }
  Edge deep{"depth beyond 0.2 m stays", st(Phase::Landing3), nav_at(0, 28.0 - 0.41), Phase::Landing3};
  all.push_back(deep);

  int failed = 0;
  std::string first;
  for (Edge e : all) {
    e.in.dt = 0.1;
    const Phase got = fsm_step(e.state, e.in, p, sds).state.phase;
    if (got != e.expect) {
      if (first.empty()) first = std::string(", first failure: ") + e.name;
      ++failed;
    }
  }
  return {failed == 0, std::to_string(all.size()) + " edges, " + std::to_string(failed) +
                           " failed" + first};
}

// 6. USBL schedule -----------------------------------------------------------
Verdict usbl_schedule() {
  auto count = [](double rate, bool upload, bool& overlap) {
    UsblLink link;
    Rng rng(1);
    int n = 0;
    for (int k = 0; k < 6000; ++k) {
      const double t = k * 0.1;
      const bool busy = link.uploading(t);
      if (usbl_poll(t, rate, upload, link, {}, 1.0, {}, rng)) {
        ++n;
        if (busy || link.uploading(t)) overlap = true;
      }
    }
    return n;
  };
  bool overlap = false;
  const int slow = count(1.5, false, overlap);
  const int fast = count(3.0, false, overlap);
  const int with_upload = count(1.5, true, overlap);
  return {slow == 15 && fast == 30 && with_upload == 15 && !overlap,
          "1.5/min: " + std::to_string(slow) + ", 3/min: " + std::to_string(fast) +
              ", 1.5/min with upload: " + std::to_string(with_upload) +
              (overlap ? ", fix during upload" : ", no fix during upload")};
}

// 7 and 8. Batches ------------------------------------------------------------
struct BatchSummary {
  BatchResult batch;
  double wall = 0.0;
  double max_docked_time = 0.0;
  double worst_l1 = 0.0;  // largest |hover - target|
  double worst_l2 = 0.0;
  int missing_hover = 0;
  int regressions = 0;
};

BatchSummary run_scenario_batch(const ScenarioConfig& c) {
  BatchSummary s;
  const auto t0 = Clock::now();
  s.batch = run_batch(c, 1, 100);
  s.wall = seconds_since(t0);
  for (const RunMetrics& m : s.batch.metrics) {
    s.regressions += m.regressions;
    if (m.outcome != Outcome::Docked) continue;
    s.max_docked_time = std::max(s.max_docked_time, m.total_time);
    if (!m.landing1_hover_altitude || !m.landing2_hover_altitude) {
      ++s.missing_hover;
      continue;
    }
    s.worst_l1 = std::max(s.worst_l1, std::abs(*m.landing1_hover_altitude -
                                               c.docking.landing1.work_altitude));
    s.worst_l2 = std::max(s.worst_l2, std::abs(*m.landing2_hover_altitude -
                                               c.docking.landing2.work_altitude));
  }
  return s;
}

Verdict pool_batch() {
  const ScenarioConfig c = load_scenario(fs::path(AUH_SCENARIO_DIR) / "pool.cfg");
  const bool setup = c.start.random_range >= 20.0 && c.noise_scale == 1.0 &&
                     c.current.mean_x == 0.0 && c.current.mean_y == 0.0 &&
                     c.current.gust_amplitude == 0.0;
  const BatchSummary s = run_scenario_batch(c);
  const bool ok = setup && s.batch.docked >= 95 && s.missing_hover == 0 && s.worst_l1 <= 0.3 &&
                  s.worst_l2 <= 0.3 && s.wall < 60.0;
  return {ok, std::to_string(s.batch.docked) + "/100 docked, hover error " +
                  fmt("%.3f", s.worst_l1) + " / " + fmt("%.3f m", s.worst_l2) +
                  ", batch wall clock " + fmt("%.2f s", s.wall) +
                  (setup ? "" : ", scenario is not the nominal pool setup")};
}

Verdict sea_trial_batch() {
  const ScenarioConfig c = load_scenario(fs::path(AUH_SCENARIO_DIR) / "sea_trial.cfg");
  const bool setup = std::abs(std::hypot(c.current.mean_x, c.current.mean_y) - 0.1) < 1e-12 &&
                     c.noise_scale == 2.0;
  const BatchSummary s = run_scenario_batch(c);
  const bool ok = setup && s.batch.docked >= 80 && s.max_docked_time < 20.0 * 60.0 &&
                  s.regressions >= 1;
  return {ok, std::to_string(s.batch.docked) + "/100 docked, longest docking " +
                  fmt("%.1f s", s.max_docked_time) + ", Landing3->Landing2 regressions " +
                  std::to_string(s.regressions) +
                  (setup ? "" : ", scenario is not the sea-trial setup")};
}

// 9. Golden record -----------------------------------------------------------
Verdict golden() {
  const fs::path path = fs::path(AUH_GOLDEN_DIR) / "pool_seed7.metrics.txt";
  std::ifstream in(path);
  if (!in) return {false, "missing " + path.filename().string()};
  std::ostringstream expected;
  expected << in.rdbuf();
  const ScenarioConfig c = load_scenario(fs::path(AUH_SCENARIO_DIR) / "pool.cfg");
  const std::string got = format_metrics(run(c, 7).metrics);
  return {got == expected.str(), "pool.cfg seed 7 vs " + path.filename().string() +
                                     (got == expected.str() ? ": identical" : ": differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"optical chain round-trip", optical_round_trip},
      {"effective radius", effective_radius_values},
      {"speed-decision law", speed_law},
      {"docking criterion", criterion},
      {"FSM transition table", fsm_edges},
      {"USBL scheduling", usbl_schedule},
      {"pool-analog batch", pool_batch},
      {"sea-trial-analog batch", sea_trial_batch},
      {"golden metrics determinism", golden},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += v.pass ? 0 : 1;
    std::printf("[%s] %d %s: %s\n", v.pass ? "PASS" : "FAIL", index, name, v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", index - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
