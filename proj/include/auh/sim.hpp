#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "auh/config.hpp"
#include "auh/fsm.hpp"

namespace auh {

// One logged tick. Column order of the trajectory log follows field order.
struct TrajectoryRecord {
  double t = 0.0;
  Phase phase = Phase::Returning;
  Pose truth;
  NavEstimate nav;
  bool visible = false;
  std::optional<Vec2> optical_fix;
  AltimeterReading altimeter;
  Setpoints setpoints;
  ActuatorCommand command;
  double r = 0.0;                       // distance to the SDS used by the FSM
  std::optional<double> decided_speed;  // Landing1/2 speed law output
  std::optional<int> phi;               // Landing3 criterion value
};

struct LogEvent {
  double t = 0.0;
  std::string kind;    // transition | usbl_fix | helm_fault | abort
  std::string detail;
};

enum class Outcome { Docked, TimedOut, Aborted };

std::string_view outcome_name(Outcome o);

struct RunMetrics {
  Outcome outcome = Outcome::TimedOut;
  double total_time = 0.0;
  std::array<double, 6> phase_time{};  // indexed by phase_index
  double final_offset = 0.0;           // m, truth horizontal distance to the SDS
  double final_yaw_error = 0.0;        // deg, |wrap(sds.yaw - yaw)|
  int regressions = 0;                 // Landing3 -> Landing2
  int light_loss_fallbacks = 0;        // Landing* -> CloseToDocking
  int transitions = 0;
  std::optional<double> landing1_hover_altitude;  // m above panel
  std::optional<double> landing2_hover_altitude;
};

struct RunResult {
  std::vector<TrajectoryRecord> records;
  std::vector<LogEvent> events;
  RunMetrics metrics;
};

/// Runs one scenario from t = 0 until Docked, max_duration, or a non-finite
/// state (abort). Deterministic for a given (config, seed).
RunResult run(const ScenarioConfig& config, std::uint64_t seed);

/// Computes the metrics from logged records alone (plus SDS geometry and the
/// dwell window). Throws std::invalid_argument for an empty record list.
RunMetrics summarize(const std::vector<TrajectoryRecord>& records,
                     const ScenarioConfig& config);

/// Column names of the trajectory log, in order.
const std::vector<std::string>& log_columns();

/// Writes records as comma-separated text with a header row; events are
/// interleaved as '#event,<t>,<kind>,<detail>' lines. Throws
/// std::runtime_error if the file cannot be written.
void write_log(const RunResult& result, const std::filesystem::path& path);

struct ParsedLog {
  std::vector<TrajectoryRecord> records;
  std::vector<LogEvent> events;
};

ParsedLog read_log(const std::filesystem::path& path);

/// `key = value` text, doubles printed with 17 significant digits.
std::string format_metrics(const RunMetrics& m);

struct BatchResult {
  std::vector<std::uint64_t> seeds;
  std::vector<RunMetrics> metrics;
  int docked = 0;

  int runs() const { return static_cast<int>(metrics.size()); }
  double success_rate() const {
    return metrics.empty() ? 0.0 : static_cast<double>(docked) / runs();
  }
};

/// Runs seeds first_seed .. first_seed + count - 1 across `threads` workers
/// (0 = hardware concurrency). Results are ordered by seed. An exception
/// thrown by any run is rethrown here after all workers have stopped.
BatchResult run_batch(const ScenarioConfig& config, std::uint64_t first_seed,
                      int count, unsigned threads = 0);

}  // namespace auh
