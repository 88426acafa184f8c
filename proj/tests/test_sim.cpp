#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "auh/sim.hpp"

using namespace auh;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "auh_test_sim";
  fs::create_directories(dir);
  return dir / name;
}

ScenarioConfig pool() { return load_scenario(fs::path(AUH_SCENARIO_DIR) / "pool.cfg"); }

ScenarioConfig sea_trial() {
  return load_scenario(fs::path(AUH_SCENARIO_DIR) / "sea_trial.cfg");
}

TrajectoryRecord record_at(double t, Phase p) {
  TrajectoryRecord r;
  r.t = t;
  r.phase = p;
  r.truth.z = 20.0;
  return r;
}

}  // namespace

TEST_CASE("a start inside 15 m begins in close to docking") {
  ScenarioConfig c;
  c.start.pose = {-8.0, 6.0, 23.0, 0.0, 0.0, 0.0};
  c.max_duration = 5.0;
  const RunResult r = run(c, 1);
  REQUIRE_FALSE(r.records.empty());
  CHECK(r.records.front().phase == Phase::CloseToDocking);

  c.start.pose = {-18.0, -12.0, 23.0, 0.0, 0.0, 0.0};
  CHECK(run(c, 1).records.front().phase == Phase::Returning);
}

TEST_CASE("default scenario docks") {
  const RunResult r = run(ScenarioConfig{}, 3);
  CHECK(r.metrics.outcome == Outcome::Docked);
  CHECK(r.records.back().phase == Phase::Docked);
  REQUIRE(r.metrics.landing1_hover_altitude);
  REQUIRE(r.metrics.landing2_hover_altitude);
  CHECK(std::abs(*r.metrics.landing1_hover_altitude - 5.0) <= 0.3);
  CHECK(std::abs(*r.metrics.landing2_hover_altitude - 3.5) <= 0.3);
}

TEST_CASE("same seed gives bit-identical logs") {
  const ScenarioConfig c = sea_trial();
  const RunResult a = run(c, 11);
  const RunResult b = run(c, 11);
  write_log(a, scratch("a.csv"));
  write_log(b, scratch("b.csv"));
  CHECK(slurp(scratch("a.csv")) == slurp(scratch("b.csv")));
  CHECK(format_metrics(a.metrics) == format_metrics(b.metrics));

  const RunResult other = run(c, 12);
  write_log(other, scratch("c.csv"));
  CHECK(slurp(scratch("a.csv")) != slurp(scratch("c.csv")));
}

TEST_CASE("log round-trips and recomputes the same metrics") {
  const ScenarioConfig c = pool();
  const RunResult r = run(c, 5);
  const fs::path path = scratch("round.csv");
  write_log(r, path);
  const ParsedLog parsed = read_log(path);
  REQUIRE(parsed.records.size() == r.records.size());
  REQUIRE(parsed.events.size() == r.events.size());
  for (std::size_t i = 0; i < r.records.size(); ++i) {
    const TrajectoryRecord& x = r.records[i];
    const TrajectoryRecord& y = parsed.records[i];
    CHECK(x.t == y.t);
    CHECK(x.phase == y.phase);
    CHECK(x.truth.x == y.truth.x);
    CHECK(x.truth.z == y.truth.z);
    CHECK(x.nav.drift == y.nav.drift);
    CHECK(x.visible == y.visible);
    CHECK(x.optical_fix.has_value() == y.optical_fix.has_value());
    CHECK(x.command.fz == y.command.fz);
    CHECK(x.decided_speed.has_value() == y.decided_speed.has_value());
    CHECK(x.phi == y.phi);
  }
  CHECK(format_metrics(summarize(parsed.records, c)) == format_metrics(r.metrics));
}

TEST_CASE("log header lists every column") {
  RunResult r;
  r.records.push_back(record_at(0.0, Phase::Returning));
  const fs::path path = scratch("one.csv");
  write_log(r, path);
  std::ifstream in(path);
  std::string header, row, extra;
  REQUIRE(std::getline(in, header));
  REQUIRE(std::getline(in, row));
  CHECK_FALSE(std::getline(in, extra));
  std::string joined;
  for (const std::string& col : log_columns()) joined += (joined.empty() ? "" : ",") + col;
  CHECK(header == joined);
}

TEST_CASE("unwritable log path is an error") {
  RunResult r;
  r.records.push_back(record_at(0.0, Phase::Returning));
  CHECK_THROWS(write_log(r, "/nonexistent-dir/sub/log.csv"));
}

TEST_CASE("every phase change has a transition event and vice versa") {
  const ScenarioConfig c = sea_trial();
  for (std::uint64_t seed : {1, 2, 3, 4}) {
    const RunResult r = run(c, seed);
    std::vector<std::string> from_records;
    for (std::size_t i = 1; i < r.records.size(); ++i) {
      if (r.records[i].phase != r.records[i - 1].phase) {
        from_records.push_back(std::string(phase_name(r.records[i - 1].phase)) + "->" +
                               std::string(phase_name(r.records[i].phase)));
      }
    }
    std::vector<std::string> from_events;
    for (const LogEvent& e : r.events) {
      if (e.kind == "transition") from_events.push_back(e.detail);
    }
    // A transition on the very first tick has no earlier record to compare.
    if (!from_events.empty() && from_records.size() + 1 == from_events.size() &&
        r.events.front().t == 0.0) {
      from_events.erase(from_events.begin());
    }
    CHECK(from_records == from_events);
    CHECK(r.metrics.transitions == static_cast<int>(from_records.size()));
  }
}

TEST_CASE("phase times add up to the total") {
  const ScenarioConfig c = sea_trial();
  for (std::uint64_t seed : {1, 2, 3}) {
    const RunMetrics m = run(c, seed).metrics;
    double sum = 0.0;
    for (double t : m.phase_time) sum += t;
    CHECK(std::abs(sum - m.total_time) <= c.dt);
  }
}

TEST_CASE("a single regression in the phase column is counted once") {
  const ScenarioConfig c;
  std::vector<TrajectoryRecord> recs;
  const Phase path[] = {Phase::Landing2, Phase::Landing3, Phase::Landing3, Phase::Landing2,
                        Phase::Landing3, Phase::Docked};
  double t = 0.0;
  for (Phase p : path) {
    recs.push_back(record_at(t, p));
    t += 0.1;
  }
  const RunMetrics m = summarize(recs, c);
  CHECK(m.regressions == 1);
  CHECK(m.transitions == 4);
  CHECK(m.outcome == Outcome::Docked);
  CHECK_THROWS_AS(summarize({}, c), std::invalid_argument);
}

TEST_CASE("phase index never jumps ahead during a run") {
  const ScenarioConfig c = sea_trial();
  const RunResult r = run(c, 21);
  for (std::size_t i = 1; i < r.records.size(); ++i) {
    CHECK(phase_index(r.records[i].phase) <= phase_index(r.records[i - 1].phase) + 1);
  }
}

TEST_CASE("a non-finite state aborts the run") {
  ScenarioConfig c;
  c.current.mean_x = 1e308;
  c.max_duration = 60.0;
  const RunResult r = run(c, 1);
  CHECK(r.metrics.outcome == Outcome::Aborted);
  REQUIRE_FALSE(r.events.empty());
  CHECK(r.events.back().kind == "abort");
}

TEST_CASE("timed out runs report the timeout") {
  ScenarioConfig c;
  c.max_duration = 10.0;
  const RunResult r = run(c, 1);
  CHECK(r.metrics.outcome == Outcome::TimedOut);
  CHECK(r.metrics.total_time == doctest::Approx(10.0));
}

TEST_CASE("batch results are ordered, exact and match single runs") {
  const ScenarioConfig c = pool();
  const BatchResult b = run_batch(c, 40, 8, 4);
  REQUIRE(b.runs() == 8);
  int docked = 0;
  for (int i = 0; i < b.runs(); ++i) {
    CHECK(b.seeds[i] == 40u + static_cast<unsigned>(i));
    CHECK(format_metrics(b.metrics[i]) == format_metrics(run(c, b.seeds[i]).metrics));
    docked += b.metrics[i].outcome == Outcome::Docked;
  }
  CHECK(b.docked == docked);
  CHECK(b.success_rate() == static_cast<double>(docked) / 8.0);
}

TEST_CASE("golden metrics record is reproduced exactly") {
  const std::string expected = slurp(fs::path(AUH_GOLDEN_DIR) / "pool_seed7.metrics.txt");
  REQUIRE_FALSE(expected.empty());
  CHECK(format_metrics(run(pool(), 7).metrics) == expected);
}
