// acceptance gate: exercises the whole stack end to end and prints one
// [PASS]/[FAIL] line per criterion; exits nonzero if any criterion fails
#include <chrono>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "rtsusp/analysis.hpp"
#include "rtsusp/harness.hpp"
#include "rtsusp/scenario_gen.hpp"
#include "rtsusp/simulator.hpp"
#include "rtsusp/task_model.hpp"

using namespace rtsusp;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int number, const char* title, bool ok, const std::string& detail) {
    std::printf("[%s] %d: %s%s%s\n", ok ? "PASS" : "FAIL", number, title,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok)
        failures++;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Task mk(const char* id, std::uint64_t c, std::uint64_t s, std::uint64_t t, std::uint64_t d,
        unsigned prio) {
    return Task{id, TimeTicks(c), TimeTicks(s), TimeTicks(t), TimeTicks(d), prio};
}

TaskSet example_set() {
    return validate_taskset({mk("t1", 1, 1, 6, 6, 1), mk("t2", 1, 6, 10, 10, 2),
                             mk("t3", 4, 1, 18, 18, 3), mk("t4", 5, 0, 20, 20, 4)});
}

char buf[256];

// criterion 1: exact blocking terms and response bounds on the example set
void criterion_blocking_and_bounds() {
    TaskSet ts = example_set();
    auto t0 = Clock::now();
    AnalysisReport report_s = analyze_taskset(ts, TestKind::TdaSuspension);
    double elapsed = seconds_since(t0);

    const std::uint64_t expect_b[] = {1, 7, 3, 3};
    const std::uint64_t expect_r[] = {2, 10, 10, 17};
    bool ok = report_s.size() == 4;
    for (unsigned k = 1; k <= 4 && ok; ++k) {
        const TestVerdict& v = report_s[k - 1];
        ok = v.outcome == Outcome::Schedulable && v.blocking &&
             v.blocking->total.v == expect_b[k - 1] && v.response_bound &&
             v.response_bound->v == expect_r[k - 1] &&
             v.response_bound->v <= ts.by_rank(k).deadline.v;
    }
    ok = ok && elapsed < 0.001;
    std::snprintf(buf, sizeof buf, "B = (1,7,3,3), bounds = (2,10,10,17), %.3f ms",
                  elapsed * 1000.0);
    report(1, "blocking terms and response bounds on the example set", ok, buf);
}

// criterion 2: utilization threshold arithmetic on the example set
void criterion_utilization() {
    TaskSet ts = example_set();
    bool ok = true;

    TestVerdict v1 = rm_utilization_test(ts, 1);
    ok = ok && v1.outcome == Outcome::Schedulable;

    TestVerdict v2 = rm_utilization_test(ts, 2);
    double bound2 = rm_utilization_bound(2);
    ok = ok && v2.outcome == Outcome::NotSchedulable;
    ok = ok && std::fabs(bound2 - 0.828427) < 1e-6;
    // LHS = (C2 + B2)/T2 + C1/T1 = 29/30, margin is LHS - bound
    ok = ok && v2.margin && std::fabs(*v2.margin - (29.0 / 30.0 - bound2)) < 1e-12;

    TestVerdict v4 = rm_utilization_test(ts, 4);
    double bound4 = rm_utilization_bound(4);
    ok = ok && v4.outcome == Outcome::NotSchedulable;
    ok = ok && std::fabs(bound4 - 0.756828) < 1e-6;
    ok = ok && v4.margin && std::fabs(*v4.margin - (8.0 / 9.0 - bound4)) < 1e-12;

    std::snprintf(buf, sizeof buf,
                  "rank 1 passes; rank 2 LHS 29/30 > %.6f; rank 4 LHS 8/9 > %.6f", bound2,
                  bound4);
    report(2, "utilization threshold arithmetic", ok, buf);
}

// criterion 3: the scaled four-task fixture replays with the documented
// idle bound and landmark ordering, and its low task meets the deadline
void criterion_fixture() {
    auto [ts, sc] = figure1_fixture();
    Trace tr = simulate(ts, sc);
    bool ok = verify_trace(tr, ts).empty();

    std::optional<TimeTicks> completion;
    for (const JobSummary& s : tr.jobs) {
        ok = ok && !s.missed && !s.incomplete;
        if (s.task_id == "t4" && s.job_index == 0)
            completion = s.completion;
    }
    ok = ok && completion && completion->v > 190 && completion->v < 200;

    const std::uint64_t t1 = sc.annotations.at("t1"), t2 = sc.annotations.at("t2");
    const std::uint64_t t3 = sc.annotations.at("t3"), t4 = sc.annotations.at("t4");
    const std::uint64_t f4 = sc.annotations.at("f4");
    ok = ok && t1 < t2 && t2 == t3 && t3 < t4 && t4 < f4;

    TimeTicks idle = idle_time(tr, TimeTicks(t1), TimeTicks(f4));
    ok = ok && idle.v <= 20;

    std::snprintf(buf, sizeof buf, "completion %llu, idle[41,199) = %llu <= 20, landmarks ordered",
                  completion ? (unsigned long long)completion->v : 0ULL,
                  (unsigned long long)idle.v);
    report(3, "scaled fixture: no miss, tight idle, ordered landmarks", ok, buf);
}

// criterion 4: randomized soundness fuzzing of every sound test
void criterion_fuzz() {
    bool ok = true;
    std::string detail;
    for (TestKind test : {TestKind::TdaSuspension, TestKind::TdaOblivious, TestKind::UtilRm}) {
        FuzzConfig cfg;
        cfg.test = test;
        cfg.n_sets = 200;
        cfg.scenarios_per_set = 20;
        cfg.seed = 7;
        FuzzReport r = soundness_fuzz(cfg);
        bool corpus_ok = r.violations.empty() && r.bound_violations.empty() &&
                         r.accepted_count > 0 && r.elapsed_seconds < 300.0;
        ok = ok && corpus_ok;
        std::snprintf(buf, sizeof buf, "%s%s: %zu accepted, %zu violations, %.1fs",
                      detail.empty() ? "" : "; ", r.test.c_str(), r.accepted_count,
                      r.violations.size() + r.bound_violations.size(), r.elapsed_seconds);
        detail += buf;
    }
    report(4, "200x20 fuzz finds no miss under any sound test", ok, detail);
}

// criterion 5: a deterministic counterexample against the unsound baseline
void criterion_counterexample() {
    CounterexampleConfig cfg;
    auto t0 = Clock::now();
    std::optional<Witness> w = counterexample_search(cfg);
    double elapsed = seconds_since(t0);
    std::optional<Witness> again = counterexample_search(cfg);

    bool ok = w && again && elapsed < 10.0 && w->violation.kind == "deadline-miss" &&
              w->set_index == again->set_index && w->scenario_index == again->scenario_index &&
              w->violation.time == again->violation.time;
    if (ok) {
        bool accepted = false;
        for (const TestVerdict& v : w->baseline_report)
            if (v.task_id == w->violation.task_id && v.outcome == Outcome::Schedulable)
                accepted = true;
        ok = accepted;
    }
    std::snprintf(buf, sizeof buf, "task %s misses at %llu, found twice in %.2fs",
                  w ? w->violation.task_id.c_str() : "?",
                  w ? (unsigned long long)w->violation.time.v : 0ULL, elapsed);
    report(5, "deterministic witness against the suspension-blind test", ok, buf);
}

// criterion 6: on suspension-free sets the analytical fixed point equals the
// simulated worst-case response of the first synchronous job
void criterion_bruteforce() {
    TasksetGenConfig gen;
    gen.n_tasks = 5;
    gen.target_utilization = Rational(3, 5);
    gen.suspension_ratio = 0.0;
    gen.n_sets = 500;
    gen.seed = 1234;
    std::vector<TaskSet> sets = generate_tasksets(gen);

    std::size_t compared = 0, agreed = 0;
    for (const TaskSet& ts : sets) {
        TimeTicks max_t{0};
        for (const Task& t : ts)
            max_t = std::max(max_t, t.period);
        TimeTicks horizon = max_t * TimeTicks(2);
        for (unsigned k = 1; k <= ts.size(); ++k) {
            TestVerdict v = tda_suspension_test(ts, static_cast<unsigned>(k));
            if (v.outcome != Outcome::Schedulable)
                continue;
            compared++;
            if (exact_wcrt_bruteforce(ts, k, horizon) == *v.response_bound)
                agreed++;
        }
    }
    bool ok = sets.size() == 500 && compared >= 500 && compared == agreed;
    std::snprintf(buf, sizeof buf, "%zu/%zu accepted ranks across 500 sets agree", agreed,
                  compared);
    report(6, "fixed point equals brute-force response when nothing suspends", ok, buf);
}

// criterion 7: structural properties on randomized inputs
bool property_blocking_bounds(std::string& why) {
    TasksetGenConfig gen;
    gen.n_tasks = 5;
    gen.n_sets = 100;
    gen.seed = 555;
    for (const TaskSet& ts : generate_tasksets(gen))
        for (unsigned k = 1; k <= ts.size(); ++k) {
            BlockingBreakdown b = blocking_time(ts, k);
            TimeTicks expect = ts.by_rank(k).max_suspension;
            TimeTicks cap_c = expect, cap_s = expect;
            for (unsigned i = 1; i < k; ++i) {
                const Task& hp = ts.by_rank(i);
                expect += std::min(hp.wcet, hp.max_suspension);
                cap_c += hp.wcet;
                cap_s += hp.max_suspension;
            }
            if (b.total != expect || b.total > cap_c || b.total > cap_s ||
                b.total < ts.by_rank(k).max_suspension) {
                why = "blocking identity broken for rank " + std::to_string(k);
                return false;
            }
        }
    return true;
}

std::uint64_t bound_or_max(const TestVerdict& v) {
    return v.outcome == Outcome::Schedulable && v.response_bound ? v.response_bound->v
                                                                 : UINT64_MAX;
}

bool property_monotonic(std::string& why) {
    TasksetGenConfig gen;
    gen.n_tasks = 4;
    gen.n_sets = 120;
    gen.seed = 901;
    Rng pick(2024);
    for (const TaskSet& ts : generate_tasksets(gen)) {
        unsigned k = static_cast<unsigned>(ts.size());
        std::uint64_t base = bound_or_max(tda_suspension_test(ts, k));

        std::vector<Task> grown(ts.tasks());
        unsigned which = static_cast<unsigned>(pick.below(k));
        switch (pick.below(3)) {
        case 0:
            if (grown[which].wcet >= grown[which].deadline)
                continue;
            grown[which].wcet += TimeTicks(1);
            break;
        case 1:
            grown[which].max_suspension += TimeTicks(7);
            break;
        default:
            // shrinking a higher-priority period raises interference; keep
            // rate-monotonic order intact by halving the top period
            if (grown[0].period.v < 2 + grown[0].wcet.v)
                continue;
            grown[0].period = TimeTicks(grown[0].period.v / 2 + 1);
            if (grown[0].deadline > grown[0].period)
                grown[0].deadline = grown[0].period;
            if (grown[0].wcet > grown[0].deadline)
                continue;
            break;
        }
        std::uint64_t worse = bound_or_max(tda_suspension_test(validate_taskset(grown), k));
        if (worse < base) {
            why = "bound improved after inflating the workload";
            return false;
        }
    }
    return true;
}

bool property_s0_reduction(std::string& why) {
    TasksetGenConfig gen;
    gen.n_tasks = 5;
    gen.n_sets = 150;
    gen.seed = 77;
    gen.suspension_ratio = 0.0;
    gen.target_utilization = Rational(7, 10);
    for (const TaskSet& ts : generate_tasksets(gen))
        for (unsigned k = 1; k <= ts.size(); ++k) {
            TestVerdict a = tda_suspension_test(ts, k);
            TestVerdict b = tda_naive_test(ts, k);
            TestVerdict c = tda_oblivious_test(ts, k);
            if (a.outcome != b.outcome || b.outcome != c.outcome ||
                bound_or_max(a) != bound_or_max(b) || bound_or_max(b) != bound_or_max(c)) {
                why = "the three time-demand variants disagree without suspensions";
                return false;
            }
        }
    return true;
}

bool property_dominance(std::string& why) {
    SweepConfig cfg;
    cfg.grid_start = Rational(2, 10);
    cfg.grid_end = Rational(8, 10);
    cfg.grid_step = Rational(2, 10);
    cfg.sets_per_bin = 40;
    cfg.n_tasks = 4;
    cfg.seed = 88;
    std::vector<SweepRow> rows = acceptance_ratio_sweep(cfg);
    for (std::size_t bin = 0; bin * cfg.tests.size() < rows.size(); ++bin) {
        std::size_t acc[4] = {0, 0, 0, 0};
        for (std::size_t t = 0; t < cfg.tests.size(); ++t) {
            const SweepRow& row = rows[bin * cfg.tests.size() + t];
            acc[static_cast<int>(row.test)] = row.accepted;
        }
        if (acc[static_cast<int>(TestKind::TdaOblivious)] >
                acc[static_cast<int>(TestKind::TdaSuspension)] ||
            acc[static_cast<int>(TestKind::UtilRm)] >
                acc[static_cast<int>(TestKind::TdaSuspension)] ||
            acc[static_cast<int>(TestKind::TdaSuspension)] >
                acc[static_cast<int>(TestKind::TdaNaive)]) {
            why = "acceptance counts out of pessimism order in bin " + std::to_string(bin);
            return false;
        }
    }
    return true;
}

bool property_conservation(std::string& why) {
    TasksetGenConfig gen;
    gen.n_tasks = 4;
    gen.n_sets = 40;
    gen.seed = 4242;
    std::size_t si = 0;
    for (const TaskSet& ts : generate_tasksets(gen)) {
        TimeTicks max_t{0};
        for (const Task& t : ts)
            max_t = std::max(max_t, t.period);
        TimeTicks horizon = max_t * TimeTicks(4);
        GenConfig sg;
        sg.seed = mix_seed(99, si++);
        Trace tr = simulate(ts, random_scenario(ts, horizon, sg));

        TimeTicks busy{0};
        for (const ExecInterval& iv : tr.exec)
            busy += iv.to - iv.from;
        TimeTicks executed{0};
        for (const JobSummary& s : tr.jobs)
            executed += s.executed;
        std::uint64_t idle_events = 0;
        std::uint64_t open = UINT64_MAX;
        for (const TraceEvent& e : tr.events) {
            if (e.kind == EventKind::IdleBegin)
                open = e.t.v;
            else if (e.kind == EventKind::IdleEnd) {
                idle_events += e.t.v - open;
                open = UINT64_MAX;
            }
        }
        if (open != UINT64_MAX)
            idle_events += horizon.v - open;
        if (executed != busy || idle_time(tr, TimeTicks(0), horizon) != horizon - busy ||
            idle_events + busy.v != horizon.v) {
            why = "busy plus idle does not cover the horizon";
            return false;
        }
    }
    return true;
}

bool property_determinism(std::string& why) {
    auto [ts, sc] = figure1_fixture();
    if (trace_to_jsonl(simulate(ts, sc)) != trace_to_jsonl(simulate(ts, sc))) {
        why = "simulation reruns differ";
        return false;
    }
    FuzzConfig fz;
    fz.n_sets = 10;
    fz.scenarios_per_set = 5;
    fz.seed = 313;
    fz.threads = 3;
    FuzzReport a = soundness_fuzz(fz);
    FuzzReport b = soundness_fuzz(fz);
    if (a.accepted_count != b.accepted_count || a.violations.size() != b.violations.size()) {
        why = "fuzz reruns differ";
        return false;
    }
    SweepConfig sw;
    sw.sets_per_bin = 10;
    sw.n_tasks = 3;
    sw.seed = 5;
    if (sweep_to_csv(acceptance_ratio_sweep(sw)) != sweep_to_csv(acceptance_ratio_sweep(sw))) {
        why = "sweep reruns differ";
        return false;
    }
    return true;
}

void criterion_properties() {
    struct Prop {
        const char* name;
        bool (*fn)(std::string&);
    };
    const Prop props[] = {
        {"blocking identity and caps", property_blocking_bounds},
        {"response bound monotone in C, S, T", property_monotonic},
        {"all time-demand variants coincide at S = 0", property_s0_reduction},
        {"acceptance ordered by pessimism", property_dominance},
        {"execution plus idle covers the horizon", property_conservation},
        {"bit-identical reruns", property_determinism},
    };
    bool ok = true;
    std::string detail;
    for (const Prop& p : props) {
        std::string why;
        bool pass = p.fn(why);
        ok = ok && pass;
        std::printf("    %s %s%s%s\n", pass ? "ok  " : "FAIL", p.name, why.empty() ? "" : ": ",
                    why.c_str());
    }
    report(7, "randomized structural properties", ok, "");
}

} // namespace

int main() {
    criterion_blocking_and_bounds();
    criterion_utilization();
    criterion_fixture();
    criterion_fuzz();
    criterion_counterexample();
    criterion_bruteforce();
    criterion_properties();
    if (failures == 0)
        std::printf("acceptance: all 7 criteria hold\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", failures);
    return failures == 0 ? 0 : 1;
}
