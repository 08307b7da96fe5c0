#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rtsusp/analysis.hpp"
#include "rtsusp/errors.hpp"
#include "rtsusp/harness.hpp"
#include "rtsusp/scenario_gen.hpp"
#include "rtsusp/simulator.hpp"
#include "rtsusp/task_model.hpp"

namespace py = pybind11;
using namespace rtsusp;

// every function speaks JSON strings so the python side needs no mirrored
// class hierarchy; json.loads on the result gives plain dicts and lists
PYBIND11_MODULE(_core, m) {
    m.doc() = "schedulability analysis for self-suspending fixed-priority task sets";
    m.attr("__version__") = "0.1.0";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def(
        "analyze",
        [](const std::string& taskset_json, const std::string& test) {
            TaskSet ts = taskset_from_json(taskset_json);
            return report_to_json(analyze_taskset(ts, test_from_name(test)));
        },
        py::arg("taskset_json"), py::arg("test") = "tda-suspension",
        "Run a schedulability test; returns the per-task report as JSON.");

    m.def(
        "simulate",
        [](const std::string& taskset_json, const std::string& scenario_json) {
            TaskSet ts = taskset_from_json(taskset_json);
            Scenario sc = scenario_from_json(scenario_json);
            validate_scenario(ts, sc);
            return trace_to_jsonl(simulate(ts, sc));
        },
        py::arg("taskset_json"), py::arg("scenario_json"),
        "Replay a scenario; returns the trace as JSON lines.");

    m.def(
        "verify",
        [](const std::string& taskset_json, const std::string& trace_jsonl) {
            TaskSet ts = taskset_from_json(taskset_json);
            return violations_to_json(verify_trace(trace_from_jsonl(trace_jsonl), ts));
        },
        py::arg("taskset_json"), py::arg("trace_jsonl"),
        "Re-check a trace against the task set; returns violations as JSON.");

    m.def(
        "generate_tasksets",
        [](std::size_t tasks, const std::string& util, std::size_t sets, std::uint64_t seed,
           double beta) {
            TasksetGenConfig cfg;
            cfg.n_tasks = tasks;
            cfg.target_utilization = Rational::parse(util);
            cfg.n_sets = sets;
            cfg.seed = seed;
            cfg.suspension_ratio = beta;
            std::vector<std::string> out;
            for (const TaskSet& ts : generate_tasksets(cfg))
                out.push_back(taskset_to_json(ts));
            return out;
        },
        py::arg("tasks") = 4, py::arg("util") = "1/2", py::arg("sets") = 1, py::arg("seed") = 1,
        py::arg("beta") = 0.5, "Generate random task sets; returns one JSON string per set.");

    m.def(
        "synchronous_scenario",
        [](const std::string& taskset_json, std::uint64_t horizon, const std::string& style,
           std::uint64_t seed) {
            TaskSet ts = taskset_from_json(taskset_json);
            GenConfig cfg;
            cfg.seed = seed;
            cfg.suspension_style = suspension_style_from_name(style);
            return scenario_to_json(synchronous_periodic_scenario(ts, TimeTicks(horizon), cfg));
        },
        py::arg("taskset_json"), py::arg("horizon"), py::arg("style") = "random-split",
        py::arg("seed") = 1, "Synchronous periodic releases up to the horizon, as JSON.");

    m.def(
        "adversarial_scenario",
        [](const std::string& taskset_json, unsigned rank, std::uint64_t horizon) {
            TaskSet ts = taskset_from_json(taskset_json);
            return scenario_to_json(deferred_adversarial_scenario(ts, rank, TimeTicks(horizon)));
        },
        py::arg("taskset_json"), py::arg("victim_rank"), py::arg("horizon"),
        "Deferred-execution pattern that maximizes interference on one task, as JSON.");

    m.def(
        "random_scenario",
        [](const std::string& taskset_json, std::uint64_t horizon, std::uint64_t seed) {
            TaskSet ts = taskset_from_json(taskset_json);
            GenConfig cfg;
            cfg.seed = seed;
            return scenario_to_json(random_scenario(ts, TimeTicks(horizon), cfg));
        },
        py::arg("taskset_json"), py::arg("horizon"), py::arg("seed") = 1,
        "Seeded sporadic scenario with random suspension splits, as JSON.");

    m.def(
        "figure1",
        [] {
            auto [ts, sc] = figure1_fixture();
            return py::make_tuple(taskset_to_json(ts), scenario_to_json(sc));
        },
        "The built-in four-task fixture: (taskset_json, scenario_json).");
}
