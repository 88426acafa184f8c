// Python bindings: scalar building blocks plus scenario runs returning plain
// dicts, so callers need nothing beyond the standard library.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "auh/config.hpp"
#include "auh/sim.hpp"

namespace py = pybind11;
using namespace auh;

namespace {

py::dict metrics_dict(const RunMetrics& m) {
  py::dict d;
  d["outcome"] = std::string(outcome_name(m.outcome));
  d["total_time"] = m.total_time;
  py::dict phases;
  for (Phase p : {Phase::Returning, Phase::CloseToDocking, Phase::Landing1, Phase::Landing2,
                  Phase::Landing3, Phase::Docked}) {
    phases[py::str(std::string(phase_name(p)))] = m.phase_time[phase_index(p)];
  }
  d["phase_time"] = phases;
  d["final_offset"] = m.final_offset;
  d["final_yaw_error"] = m.final_yaw_error;
  d["regressions"] = m.regressions;
  d["light_loss_fallbacks"] = m.light_loss_fallbacks;
  d["transitions"] = m.transitions;
  d["landing1_hover_altitude"] = m.landing1_hover_altitude;
  d["landing2_hover_altitude"] = m.landing2_hover_altitude;
  return d;
}

// Column-oriented trajectory: one list per logged quantity.
py::dict trajectory_dict(const std::vector<TrajectoryRecord>& records) {
  std::vector<double> t, x, y, z, roll, pitch, yaw, nav_x, nav_y;
  std::vector<std::string> phase;
  std::vector<bool> visible;
  for (const TrajectoryRecord& r : records) {
    t.push_back(r.t);
    phase.emplace_back(phase_name(r.phase));
    x.push_back(r.truth.x);
    y.push_back(r.truth.y);
    z.push_back(r.truth.z);
    roll.push_back(r.truth.roll);
    pitch.push_back(r.truth.pitch);
    yaw.push_back(r.truth.yaw);
    nav_x.push_back(r.nav.x);
    nav_y.push_back(r.nav.y);
    visible.push_back(r.visible);
  }
  py::dict d;
  d["t"] = t;
  d["phase"] = phase;
  d["x"] = x;
  d["y"] = y;
  d["z"] = z;
  d["roll"] = roll;
  d["pitch"] = pitch;
  d["yaw"] = yaw;
  d["nav_x"] = nav_x;
  d["nav_y"] = nav_y;
  d["visible"] = visible;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "AUH docking simulator core";

  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ScenarioLoadError>(m, "ScenarioLoadError", config_error.ptr());
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation", PyExc_RuntimeError);

  m.def("wrap_angle", &wrap_angle, py::arg("deg"), "Map an angle to (-180, 180] degrees.");
  m.def("effective_radius", &effective_radius, py::arg("h"), py::arg("divergence_deg") = 70.0,
        "Horizontal radius of the light cone at height h.");
  m.def("speed_decision", &speed_decision, py::arg("r"), py::arg("transit_speed") = 0.3,
        py::arg("inner_radius") = 0.3, py::arg("outer_radius") = 1.5);
  m.def(
      "docking_criterion",
      [](double roll, double pitch, double yaw, double depth, double desired_depth,
         double desired_yaw) {
        CriterionThresholds thr;
        thr.desired_depth = desired_depth;
        thr.desired_yaw = desired_yaw;
        const CriterionResult c = docking_criterion({roll, pitch, yaw}, depth, thr);
        return py::make_tuple(c.phi, c.success);
      },
      py::arg("roll"), py::arg("pitch"), py::arg("yaw"), py::arg("depth"),
      py::arg("desired_depth"), py::arg("desired_yaw") = 0.0,
      "Returns (phi, success) with the default 45/5/5 deg and 0.2 m thresholds.");

  m.def(
      "project_spot",
      [](double x, double y, double z, double yaw,
         std::tuple<double, double, double> light) -> std::optional<py::tuple> {
        const auto [lx, ly, lz] = light;
        const SpotObservation s = project_spot({x, y, z, 0, 0, yaw}, {lx, ly, lz}, {});
        if (!s.visible) return std::nullopt;
        return py::make_tuple(s.u, s.v, s.h);
      },
      py::arg("x"), py::arg("y"), py::arg("z"), py::arg("yaw"),
      py::arg("light") = std::make_tuple(0.0, 0.0, 28.0),
      "Spot (u, v, h) seen from the vehicle with the default camera, or None.");
  m.def(
      "locate_vehicle",
      [](double u, double v, double h, double yaw, std::tuple<double, double, double> light) {
        const auto [lx, ly, lz] = light;
        const Vec2 p = locate_vehicle({u, v, true, h}, yaw, {}, {lx, ly, lz});
        return py::make_tuple(p.x, p.y);
      },
      py::arg("u"), py::arg("v"), py::arg("h"), py::arg("yaw"),
      py::arg("light") = std::make_tuple(0.0, 0.0, 28.0));

  py::class_<ScenarioConfig>(m, "Scenario")
      .def(py::init<>())
      .def_static("from_text", &parse_scenario, py::arg("text"))
      .def_static(
          "from_file", [](const std::string& path) { return load_scenario(path); },
          py::arg("path"))
      .def("dump", [](const ScenarioConfig& c) { return dump_scenario(c); })
      .def_readwrite("dt", &ScenarioConfig::dt)
      .def_readwrite("max_duration", &ScenarioConfig::max_duration)
      .def_readwrite("seed", &ScenarioConfig::seed)
      .def_readwrite("noise_scale", &ScenarioConfig::noise_scale);

  m.def("scenario_keys", &scenario_keys);
  m.def("dump_defaults", [] { return dump_scenario(ScenarioConfig{}); });

  m.def(
      "run",
      [](const ScenarioConfig& c, std::optional<std::uint64_t> seed, bool trajectory) {
        RunResult r;
        {
          py::gil_scoped_release release;
          r = run(c, seed.value_or(c.seed));
        }
        py::dict out = metrics_dict(r.metrics);
        if (trajectory) out["trajectory"] = trajectory_dict(r.records);
        return out;
      },
      py::arg("scenario"), py::arg("seed") = py::none(), py::arg("trajectory") = false,
      "Run one scenario; returns the metrics (and optionally the trajectory).");
  m.def(
      "run_batch",
      [](const ScenarioConfig& c, std::uint64_t first_seed, int count, unsigned threads) {
        BatchResult b;
        {
          py::gil_scoped_release release;
          b = run_batch(c, first_seed, count, threads);
        }
        py::list runs;
        for (const RunMetrics& mm : b.metrics) runs.append(metrics_dict(mm));
        py::dict out;
        out["seeds"] = b.seeds;
        out["docked"] = b.docked;
        out["success_rate"] = b.success_rate();
        out["runs"] = runs;
        return out;
      },
      py::arg("scenario"), py::arg("first_seed") = 1, py::arg("count") = 100,
      py::arg("threads") = 0);
}
