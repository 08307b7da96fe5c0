#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rtsusp/analysis.hpp"
#include "rtsusp/scenario_gen.hpp"
#include "rtsusp/simulator.hpp"

namespace rtsusp {

// effective worker count: requested (0 means machine parallelism), capped by
// the RTSUSP_THREADS environment variable when set, never below 1
unsigned resolve_threads(unsigned requested);

// runs body(0..count-1) across the given number of workers; any exception is
// rethrown in the caller after all workers stop
void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& body);

struct FuzzConfig {
    TestKind test = TestKind::TdaSuspension;
    std::size_t n_sets = 200;
    std::size_t scenarios_per_set = 20;
    std::uint64_t seed = 7;
    std::size_t n_tasks = 4;
    Rational target_utilization{13, 20};
    double suspension_ratio = 0.5;
    std::size_t max_suspension_phases = 3;
    unsigned threads = 0;
};

struct FuzzViolation {
    std::size_t set_index = 0;
    std::size_t scenario_index = 0;
    Violation violation;
};

struct FuzzReport {
    std::string test;
    std::size_t tasksets_tested = 0;
    std::size_t scenarios_per_set = 0;
    std::size_t accepted_count = 0;   // tasks accepted, summed over all sets
    std::size_t miss_count = 0;       // always equals violations.size()
    std::vector<FuzzViolation> violations;         // misses of accepted tasks
                                                   // and broken trace invariants
    std::vector<FuzzViolation> bound_violations;   // response above the bound
    double elapsed_seconds = 0.0;
};

// generates task sets, analyzes each with cfg.test, then simulates random,
// synchronous and deferred-adversarial scenarios; records any deadline miss
// of an accepted task, any trace-invariant break, and any completed job of an
// accepted task whose response exceeds the certified bound.
// simulation horizon: 2 * max period * (n_tasks + 1)
FuzzReport soundness_fuzz(const FuzzConfig& cfg);

std::string fuzz_report_to_json(const FuzzReport& report);

struct CounterexampleConfig {
    TestKind baseline = TestKind::TdaNaive;
    std::size_t max_sets = 50;
    std::uint64_t seed = 1;
    bool include_canonical = true;
    std::size_t n_tasks = 3;
    Rational target_utilization{7, 10};
    double suspension_ratio = 0.8;
    std::size_t scenarios_per_set = 10;
};

struct Witness {
    TaskSet tasks;
    Scenario scenario;
    Trace trace;
    Violation violation;             // the first deadline miss of an accepted task
    AnalysisReport baseline_report;  // the accepting verdicts being refuted
    std::size_t set_index = 0;       // 0 is the hand-built canonical pair
    std::size_t scenario_index = 0;
};

// two tasks for which the suspension-blind test accepts the lower-priority
// task yet a legal deferred-execution scenario misses its deadline
std::vector<Task> canonical_unsound_pair();

// searches the canonical pair and generated task sets for a case where the
// baseline accepts a task that a legal scenario then drives past its
// deadline; returns the first witness in deterministic order
std::optional<Witness> counterexample_search(const CounterexampleConfig& cfg);

// response time of the rank-k task's first job under synchronous periodic
// releases of ranks 1..k, which is exact for suspension-free sets; errors if
// any of those tasks can suspend or the job is unfinished at the horizon
TimeTicks exact_wcrt_bruteforce(const TaskSet& ts, unsigned rank, TimeTicks horizon);

struct SweepConfig {
    std::vector<TestKind> tests = {TestKind::TdaSuspension, TestKind::UtilRm,
                                   TestKind::TdaNaive, TestKind::TdaOblivious};
    Rational grid_start{1, 10};
    Rational grid_end{9, 10};
    Rational grid_step{1, 10};
    std::size_t sets_per_bin = 100;
    std::size_t n_tasks = 5;
    double suspension_ratio = 0.5;
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

struct SweepRow {
    Rational util_bin;
    TestKind test = TestKind::TdaSuspension;
    std::size_t accepted = 0;   // sets with every task schedulable
    std::size_t samples = 0;
};

// per utilization bin, generates sets_per_bin task sets (shared across the
// tests) and counts full acceptance by each test
std::vector<SweepRow> acceptance_ratio_sweep(const SweepConfig& cfg);

// header: util_bin,test,accept_ratio,samples
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

} // namespace rtsusp
