// Command-line front end: single runs, seeded batches, and the default
// scenario dump.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "auh/config.hpp"
#include "auh/sim.hpp"

namespace fs = std::filesystem;

namespace {

auh::ScenarioConfig load(const std::string& path, std::optional<double> max_duration) {
  auh::ScenarioConfig config = path.empty() ? auh::ScenarioConfig{} : auh::load_scenario(path);
  if (max_duration) {
    config.max_duration = *max_duration;
    config.validate();
  }
  return config;
}

int cmd_run(const std::string& scenario, std::uint64_t seed, const fs::path& out,
            std::optional<double> max_duration) {
  const auh::ScenarioConfig config = load(scenario, max_duration);
  const auh::RunResult result = auh::run(config, seed);
  fs::create_directories(out);
  auh::write_log(result, out / "trajectory.csv");
  const std::string metrics = auh::format_metrics(result.metrics);
  std::ofstream(out / "metrics.txt") << metrics;
  std::cout << metrics;
  return result.metrics.outcome == auh::Outcome::Docked ? 0 : 1;
}

int cmd_batch(const std::string& scenario, std::uint64_t first_seed, int seeds,
              const fs::path& out, std::optional<double> max_duration, unsigned threads) {
  const auh::ScenarioConfig config = load(scenario, max_duration);
  const auh::BatchResult batch = auh::run_batch(config, first_seed, seeds, threads);
  fs::create_directories(out);
  std::ofstream csv(out / "batch.csv");
  csv << "seed,outcome,total_time,final_offset,final_yaw_error,regressions,"
         "light_loss_fallbacks,landing1_hover_altitude,landing2_hover_altitude\n";
  auto opt = [](const std::optional<double>& v) {
    char buf[32] = "";
    if (v) std::snprintf(buf, sizeof buf, "%.6g", *v);
    return std::string(buf);
  };
  for (int i = 0; i < batch.runs(); ++i) {
    const auh::RunMetrics& m = batch.metrics[i];
    char row[256];
    std::snprintf(row, sizeof row, "%llu,%s,%.6g,%.6g,%.6g,%d,%d,",
                  static_cast<unsigned long long>(batch.seeds[i]),
                  std::string(auh::outcome_name(m.outcome)).c_str(), m.total_time,
                  m.final_offset, m.final_yaw_error, m.regressions, m.light_loss_fallbacks);
    csv << row << opt(m.landing1_hover_altitude) << ',' << opt(m.landing2_hover_altitude)
        << '\n';
  }
  std::cout << "runs = " << batch.runs() << "\n"
            << "docked = " << batch.docked << "\n"
            << "success_rate = " << batch.success_rate() << "\n"
            << "success_floor = " << config.batch_success_floor << "\n";
  return batch.success_rate() >= config.batch_success_floor ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acoustic-inertial-optical docking simulator"};
  app.require_subcommand(0, 1);

  bool dump_defaults = false;
  app.add_flag("--dump-defaults", dump_defaults, "Print the default scenario and exit");

  std::string scenario;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::optional<double> max_duration;
  int seeds = 100;
  unsigned threads = 0;

  auto* run = app.add_subcommand("run", "Simulate one docking run");
  run->add_option("--scenario", scenario, "Scenario file (key = value)");
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--out", out, "Output directory");
  run->add_option("--max-duration", max_duration, "Override sim.max_duration (s)");

  auto* batch = app.add_subcommand("batch", "Simulate a range of seeds");
  batch->add_option("--scenario", scenario, "Scenario file (key = value)");
  batch->add_option("--seeds", seeds, "Number of seeds")->check(CLI::PositiveNumber);
  batch->add_option("--first-seed", seed, "First seed of the range");
  batch->add_option("--out", out, "Output directory");
  batch->add_option("--max-duration", max_duration, "Override sim.max_duration (s)");
  batch->add_option("--threads", threads, "Worker threads (0 = all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dump_defaults) {
      std::cout << auh::dump_scenario(auh::ScenarioConfig{});
      return 0;
    }
    if (run->parsed()) return cmd_run(scenario, seed, out, max_duration);
    if (batch->parsed()) return cmd_batch(scenario, seed, seeds, out, max_duration, threads);
    std::cerr << app.help();
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
