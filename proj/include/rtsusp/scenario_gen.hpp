#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rtsusp/rational.hpp"
#include "rtsusp/simulator.hpp"
#include "rtsusp/task_model.hpp"

namespace rtsusp {

// deterministic draws on top of std::mt19937_64; bounded values use
// rejection sampling so output does not depend on the standard library's
// distribution implementations
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next() { return eng_(); }

    // uniform in [0, n); n >= 1
    std::uint64_t below(std::uint64_t n);

    // uniform in [lo, hi], both inclusive
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi);

    // uniform in [0, 1) with 53 significant bits
    double uniform01() { return (next() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 eng_;
};

// derives an independent child seed from a base seed and an index
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

enum class SuspensionStyle { None, RandomSplit, DeferredMax };

const char* suspension_style_name(SuspensionStyle s);
SuspensionStyle suspension_style_from_name(const std::string& name);

struct GenConfig {
    std::uint64_t seed = 1;
    std::size_t max_jobs_per_task = 0;   // 0: as many as fit below the horizon
    SuspensionStyle suspension_style = SuspensionStyle::RandomSplit;
    std::size_t max_suspension_phases = 3;   // >= 1
};

// releases at 0, T, 2T, ... strictly below the horizon; segment shape per
// cfg.suspension_style (None: one exec block; DeferredMax: minimal first
// chunk, all suspension, remainder; RandomSplit: seeded random segments)
Scenario synchronous_periodic_scenario(const TaskSet& ts, TimeTicks horizon,
                                       const GenConfig& cfg);

// worst-case deferred-execution pattern against the rank-k task: each
// higher-priority task's first job runs 1 tick, suspends S_i, then finishes,
// so its remainder lands back to back with the next job released exactly one
// period later; the victim releases a single job at max S_i over those tasks
// and defers its own execution the same way
Scenario deferred_adversarial_scenario(const TaskSet& ts, unsigned victim_rank,
                                       TimeTicks horizon);

// sporadic releases with geometric-tail jitter past the minimum separation;
// per job, a uniform suspension count in 1..max_suspension_phases, a uniform
// total in 0..S, split at random across the phases between random exec chunks
Scenario random_scenario(const TaskSet& ts, TimeTicks horizon, const GenConfig& cfg);

// the four-task illustrative workload at 10 ticks per time unit, with its
// landmark instants recorded as scenario annotations
std::pair<TaskSet, Scenario> figure1_fixture();

struct TasksetGenConfig {
    std::size_t n_tasks = 4;
    Rational target_utilization{1, 2};   // in (0, 1]
    std::size_t n_sets = 1;
    std::uint64_t seed = 1;
    double suspension_ratio = 0.5;   // beta: S_i up to beta * (T_i - C_i)
    std::uint64_t min_period = 1000;
    std::uint64_t max_period = 100000;
    std::size_t max_retries = 200;   // redraws per set before giving up
};

// UUniFast utilizations, log-uniform periods, C = round(U*T) clamped >= 1,
// S = round(beta * (T - C) * u), D = T, rate-monotonic priorities; sets whose
// rounding pushes total utilization above 1 are redrawn
std::vector<TaskSet> generate_tasksets(const TasksetGenConfig& cfg);

} // namespace rtsusp
