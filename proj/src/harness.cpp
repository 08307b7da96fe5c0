#include "rtsusp/harness.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <set>
#include <thread>

#include "json.hpp"

namespace rtsusp {

using json = nlohmann::ordered_json;

unsigned resolve_threads(unsigned requested) {
    unsigned cap = 0;
    if (const char* env = std::getenv("RTSUSP_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end == env || *end != '\0' || v == 0 || v > 1024)
            throw InputError("RTSUSP_THREADS must be an integer in 1..1024");
        cap = static_cast<unsigned>(v);
    }
    unsigned n = requested != 0 ? requested : std::thread::hardware_concurrency();
    if (n == 0)
        n = 1;
    if (cap != 0 && n > cap)
        n = cap;
    return n;
}

void parallel_for_index(std::size_t count, unsigned threads,
                        const std::function<void(std::size_t)>& body) {
    if (count == 0)
        return;
    if (threads <= 1 || count == 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count)
                return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error)
                    first_error = std::current_exception();
                stop.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    unsigned n = std::min<std::size_t>(threads, count);
    for (unsigned i = 0; i < n; ++i)
        pool.emplace_back(worker);
    for (std::thread& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

namespace {

TimeTicks fuzz_horizon(const TaskSet& ts) {
    TimeTicks max_period;
    for (const Task& t : ts)
        max_period = std::max(max_period, t.period);
    return max_period * TimeTicks(2 * (ts.size() + 1));
}

struct Acceptance {
    std::set<std::string> tasks;
    std::map<std::string, TimeTicks> bounds;
};

Acceptance accepted_tasks(const AnalysisReport& report) {
    Acceptance a;
    for (const TestVerdict& v : report)
        if (v.outcome == Outcome::Schedulable) {
            a.tasks.insert(v.task_id);
            if (v.response_bound)
                a.bounds[v.task_id] = *v.response_bound;
        }
    return a;
}

// scenario battery shared by the fuzzer and the counterexample search:
// cfg.scenarios_per_set random ones, the two synchronous shapes, then one
// deferred-adversarial per rank
std::vector<Scenario> scenario_battery(const TaskSet& ts, TimeTicks horizon,
                                       std::uint64_t seed, std::size_t n_random,
                                       std::size_t max_phases) {
    std::vector<Scenario> out;
    GenConfig rc;
    rc.max_suspension_phases = max_phases;
    for (std::size_t m = 0; m < n_random; ++m) {
        rc.seed = mix_seed(seed, 1000 + m);
        out.push_back(random_scenario(ts, horizon, rc));
    }
    GenConfig sync;
    sync.suspension_style = SuspensionStyle::None;
    out.push_back(synchronous_periodic_scenario(ts, horizon, sync));
    sync.suspension_style = SuspensionStyle::DeferredMax;
    out.push_back(synchronous_periodic_scenario(ts, horizon, sync));
    for (unsigned k = 1; k <= ts.size(); ++k)
        out.push_back(deferred_adversarial_scenario(ts, k, horizon));
    return out;
}

} // namespace

FuzzReport soundness_fuzz(const FuzzConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    FuzzReport rep;
    rep.test = test_name(cfg.test);
    rep.tasksets_tested = cfg.n_sets;
    rep.scenarios_per_set = cfg.scenarios_per_set;

    struct SetResult {
        std::size_t accepted = 0;
        std::vector<FuzzViolation> misses;
        std::vector<FuzzViolation> bounds;
    };
    std::vector<SetResult> results(cfg.n_sets);

    parallel_for_index(cfg.n_sets, resolve_threads(cfg.threads), [&](std::size_t si) {
        TasksetGenConfig gen;
        gen.n_tasks = cfg.n_tasks;
        gen.target_utilization = cfg.target_utilization;
        gen.n_sets = 1;
        gen.seed = mix_seed(cfg.seed, si);
        gen.suspension_ratio = cfg.suspension_ratio;
        TaskSet ts = generate_tasksets(gen).front();

        Acceptance acc = accepted_tasks(analyze_taskset(ts, cfg.test));
        SetResult& r = results[si];
        r.accepted = acc.tasks.size();

        TimeTicks horizon = fuzz_horizon(ts);
        std::vector<Scenario> scenarios = scenario_battery(
            ts, horizon, gen.seed, cfg.scenarios_per_set, cfg.max_suspension_phases);
        for (std::size_t sci = 0; sci < scenarios.size(); ++sci) {
            Trace tr = simulate(ts, scenarios[sci]);
            for (Violation& v : verify_trace(tr, ts)) {
                bool is_miss = v.kind == "deadline-miss";
                if (is_miss && acc.tasks.count(v.task_id) == 0)
                    continue;   // miss of a task the test rejected: expected
                r.misses.push_back({si, sci, std::move(v)});
            }
            for (const JobSummary& s : tr.jobs) {
                auto it = acc.bounds.find(s.task_id);
                if (it == acc.bounds.end() || !s.completion)
                    continue;
                TimeTicks response = *s.completion - s.release;
                if (response > it->second)
                    r.bounds.push_back(
                        {si, sci,
                         Violation{"response-bound-exceeded", *s.completion, s.task_id,
                                   s.job_index,
                                   "response " + std::to_string(response.v) +
                                       " above the certified bound " +
                                       std::to_string(it->second.v)}});
            }
        }
    });

    for (SetResult& r : results) {
        rep.accepted_count += r.accepted;
        for (FuzzViolation& v : r.misses)
            rep.violations.push_back(std::move(v));
        for (FuzzViolation& v : r.bounds)
            rep.bound_violations.push_back(std::move(v));
    }
    rep.miss_count = rep.violations.size();
    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::string fuzz_report_to_json(const FuzzReport& report) {
    auto violation_list = [](const std::vector<FuzzViolation>& vs) {
        json arr = json::array();
        for (const FuzzViolation& fv : vs) {
            json jv;
            jv["set"] = fv.set_index;
            jv["scenario"] = fv.scenario_index;
            jv["kind"] = fv.violation.kind;
            jv["time"] = fv.violation.time.v;
            jv["task"] = fv.violation.task_id;
            jv["job"] = fv.violation.job_index;
            if (!fv.violation.detail.empty())
                jv["detail"] = fv.violation.detail;
            arr.push_back(std::move(jv));
        }
        return arr;
    };
    json root;
    root["test"] = report.test;
    root["tasksets_tested"] = report.tasksets_tested;
    root["scenarios_per_set"] = report.scenarios_per_set;
    root["accepted_count"] = report.accepted_count;
    root["miss_count"] = report.miss_count;
    root["violations"] = violation_list(report.violations);
    root["bound_violations"] = violation_list(report.bound_violations);
    root["elapsed_seconds"] = report.elapsed_seconds;
    return root.dump(2) + "\n";
}

std::vector<Task> canonical_unsound_pair() {
    return {
        {"t1", TimeTicks(4), TimeTicks(4), TimeTicks(8), TimeTicks(8), 1},
        {"t2", TimeTicks(4), TimeTicks(0), TimeTicks(10), TimeTicks(10), 2},
    };
}

std::optional<Witness> counterexample_search(const CounterexampleConfig& cfg) {
    if (cfg.baseline != TestKind::TdaNaive)
        throw InputError("counterexample baseline must be tda-naive");
    for (std::size_t si = 0; si <= cfg.max_sets; ++si) {
        std::optional<TaskSet> ts;
        if (si == 0) {
            if (!cfg.include_canonical)
                continue;
            ts = validate_taskset(canonical_unsound_pair());
        } else {
            TasksetGenConfig gen;
            gen.n_tasks = cfg.n_tasks;
            gen.target_utilization = cfg.target_utilization;
            gen.n_sets = 1;
            gen.seed = mix_seed(cfg.seed, si);
            gen.suspension_ratio = cfg.suspension_ratio;
            ts = generate_tasksets(gen).front();
        }
        AnalysisReport report = analyze_taskset(*ts, cfg.baseline);
        Acceptance acc = accepted_tasks(report);
        if (acc.tasks.empty())
            continue;

        TimeTicks horizon = fuzz_horizon(*ts);
        std::vector<Scenario> scenarios = scenario_battery(
            *ts, horizon, mix_seed(cfg.seed, si), cfg.scenarios_per_set, 3);
        // adversarial scenarios sit at the end of the battery; try them first
        std::vector<std::size_t> order;
        for (std::size_t i = scenarios.size(); i-- > 0;)
            order.push_back(i);
        for (std::size_t sci : order) {
            Trace tr = simulate(*ts, scenarios[sci]);
            for (Violation& v : verify_trace(tr, ts.value()))
                if (v.kind == "deadline-miss" && acc.tasks.count(v.task_id) != 0)
                    return Witness{std::move(*ts), std::move(scenarios[sci]), std::move(tr),
                                   std::move(v), std::move(report), si, sci};
        }
    }
    return std::nullopt;
}

TimeTicks exact_wcrt_bruteforce(const TaskSet& ts, unsigned rank, TimeTicks horizon) {
    const Task& target = ts.by_rank(rank);
    std::vector<Task> prefix;
    for (unsigned i = 1; i <= rank; ++i) {
        const Task& t = ts.by_rank(i);
        if (t.max_suspension.v != 0)
            throw ValidationError("task '" + t.id +
                                  "' can suspend; synchronous release is only the worst "
                                  "case without suspensions");
        prefix.push_back(t);
    }
    TaskSet sub = validate_taskset(prefix);
    GenConfig gen;
    gen.suspension_style = SuspensionStyle::None;
    Scenario sc = synchronous_periodic_scenario(sub, horizon, gen);
    Trace tr = simulate(sub, sc);
    for (const JobSummary& s : tr.jobs)
        if (s.task_id == target.id && s.job_index == 0) {
            if (!s.completion)
                throw RangeError("task '" + target.id + "' unfinished at horizon " +
                                 std::to_string(horizon.v));
            return *s.completion;
        }
    throw RangeError("no job of task '" + target.id + "' inside the horizon");
}

std::vector<SweepRow> acceptance_ratio_sweep(const SweepConfig& cfg) {
    if (!(Rational(0) < cfg.grid_step))
        throw ValidationError("sweep grid step must be positive");
    if (!(Rational(0) < cfg.grid_start) || Rational(1) < cfg.grid_end)
        throw ValidationError("sweep grid bounds must lie in (0, 1]");
    if (cfg.sets_per_bin == 0)
        throw ValidationError("sets_per_bin must be at least 1");
    if (cfg.tests.empty())
        throw ValidationError("sweep needs at least one test");

    std::vector<Rational> bins;
    for (Rational u = cfg.grid_start; u <= cfg.grid_end; u = u + cfg.grid_step)
        bins.push_back(u);
    if (bins.empty())
        return {};

    const std::size_t n_tests = cfg.tests.size();
    std::vector<std::uint8_t> accept(bins.size() * cfg.sets_per_bin * n_tests, 0);

    parallel_for_index(bins.size() * cfg.sets_per_bin, resolve_threads(cfg.threads),
                       [&](std::size_t flat) {
                           std::size_t bi = flat / cfg.sets_per_bin;
                           TasksetGenConfig gen;
                           gen.n_tasks = cfg.n_tasks;
                           gen.target_utilization = bins[bi];
                           gen.n_sets = 1;
                           gen.seed = mix_seed(cfg.seed, flat);
                           gen.suspension_ratio = cfg.suspension_ratio;
                           TaskSet ts = generate_tasksets(gen).front();
                           for (std::size_t ti = 0; ti < n_tests; ++ti) {
                               AnalysisReport rp = analyze_taskset(ts, cfg.tests[ti]);
                               bool all = true;
                               for (const TestVerdict& v : rp)
                                   all = all && v.outcome == Outcome::Schedulable;
                               accept[flat * n_tests + ti] = all ? 1 : 0;
                           }
                       });

    std::vector<SweepRow> rows;
    for (std::size_t bi = 0; bi < bins.size(); ++bi)
        for (std::size_t ti = 0; ti < n_tests; ++ti) {
            SweepRow row;
            row.util_bin = bins[bi];
            row.test = cfg.tests[ti];
            row.samples = cfg.sets_per_bin;
            for (std::size_t si = 0; si < cfg.sets_per_bin; ++si)
                row.accepted += accept[(bi * cfg.sets_per_bin + si) * n_tests + ti];
            rows.push_back(row);
        }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string out = "util_bin,test,accept_ratio,samples\n";
    for (const SweepRow& row : rows) {
        char line[160];
        double ratio = row.samples == 0
                           ? 0.0
                           : static_cast<double>(row.accepted) / static_cast<double>(row.samples);
        std::snprintf(line, sizeof(line), "%.6g,%s,%.6g,%zu\n", row.util_bin.to_double(),
                      test_name(row.test), ratio, row.samples);
        out += line;
    }
    return out;
}

} // namespace rtsusp
