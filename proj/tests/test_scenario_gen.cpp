#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rtsusp/scenario_gen.hpp"
#include "rtsusp/simulator.hpp"
#include "rtsusp/task_model.hpp"

using namespace rtsusp;

namespace {

Task mk(const char* id, std::uint64_t c, std::uint64_t s, std::uint64_t t, std::uint64_t d,
        unsigned prio) {
    return Task{id, TimeTicks(c), TimeTicks(s), TimeTicks(t), TimeTicks(d), prio};
}

TaskSet example_set() {
    return validate_taskset({mk("t1", 1, 1, 6, 6, 1), mk("t2", 1, 6, 10, 10, 2),
                             mk("t3", 4, 1, 18, 18, 3), mk("t4", 5, 0, 20, 20, 4)});
}

std::map<std::string, std::size_t> jobs_per_task(const Scenario& sc) {
    std::map<std::string, std::size_t> counts;
    for (const JobSpec& j : sc.jobs)
        counts[j.task_id]++;
    return counts;
}

} // namespace

TEST_CASE("seeded draws are reproducible and in range") {
    Rng a(42), b(42), c(43);
    bool all_equal = true, any_differs = false;
    for (int i = 0; i < 100; ++i) {
        std::uint64_t x = a.below(1000);
        all_equal = all_equal && x == b.below(1000);
        any_differs = any_differs || x != c.below(1000);
        CHECK(x < 1000);
    }
    CHECK(all_equal);
    CHECK(any_differs);

    Rng r(7);
    for (int i = 0; i < 50; ++i) {
        CHECK(r.below(1) == 0);
        std::uint64_t y = r.between(3, 5);
        CHECK(y >= 3);
        CHECK(y <= 5);
        CHECK(r.between(9, 9) == 9);
        double u = r.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("child seeds separate") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t base : {1ULL, 2ULL, 99ULL})
        for (std::uint64_t idx = 0; idx < 50; ++idx)
            seen.insert(mix_seed(base, idx));
    CHECK(seen.size() == 150);
}

TEST_CASE("synchronous periodic releases up to the horizon") {
    TaskSet ts = example_set();
    GenConfig cfg;
    cfg.suspension_style = SuspensionStyle::None;
    Scenario sc = synchronous_periodic_scenario(ts, TimeTicks(20), cfg);
    CHECK_NOTHROW(validate_scenario(ts, sc));

    auto counts = jobs_per_task(sc);
    CHECK(counts["t1"] == 4);  // 0, 6, 12, 18
    CHECK(counts["t2"] == 2);  // 0, 10
    CHECK(counts["t3"] == 2);  // 0, 18
    CHECK(counts["t4"] == 1);  // 0
    for (const JobSpec& j : sc.jobs) {
        REQUIRE(j.segments.size() == 1);
        CHECK(j.segments[0].kind == SegmentKind::Exec);
    }
}

TEST_CASE("synchronous deferred style front-loads a minimal chunk") {
    TaskSet ts = example_set();
    GenConfig cfg;
    cfg.suspension_style = SuspensionStyle::DeferredMax;
    cfg.max_jobs_per_task = 1;
    Scenario sc = synchronous_periodic_scenario(ts, TimeTicks(20), cfg);
    CHECK_NOTHROW(validate_scenario(ts, sc));
    REQUIRE(sc.jobs.size() == 4);

    for (const JobSpec& j : sc.jobs) {
        if (j.task_id == "t3") {
            // C = 4, S = 1: one tick, the whole suspension, the rest
            REQUIRE(j.segments.size() == 3);
            CHECK(j.segments[0].length == TimeTicks(1));
            CHECK(j.segments[1].kind == SegmentKind::Susp);
            CHECK(j.segments[1].length == TimeTicks(1));
            CHECK(j.segments[2].length == TimeTicks(3));
        } else {
            // C < 2 or S = 0 leaves nothing to defer
            REQUIRE(j.segments.size() == 1);
        }
    }
}

TEST_CASE("random segment splits stay legal and reproducible") {
    TaskSet ts = example_set();
    GenConfig cfg;
    cfg.seed = 11;
    Scenario a = synchronous_periodic_scenario(ts, TimeTicks(200), cfg);
    Scenario b = synchronous_periodic_scenario(ts, TimeTicks(200), cfg);
    CHECK_NOTHROW(validate_scenario(ts, a));
    CHECK(scenario_to_json(a) == scenario_to_json(b));
}

TEST_CASE("sporadic scenario respects separation and the seed") {
    auto [ts, fig_sc] = figure1_fixture();
    GenConfig cfg;
    cfg.seed = 5;
    Scenario a = random_scenario(ts, TimeTicks(500), cfg);
    CHECK_NOTHROW(validate_scenario(ts, a));
    Scenario a2 = random_scenario(ts, TimeTicks(500), cfg);
    CHECK(scenario_to_json(a) == scenario_to_json(a2));
    cfg.seed = 6;
    Scenario b = random_scenario(ts, TimeTicks(500), cfg);
    CHECK(scenario_to_json(a) != scenario_to_json(b));
    (void)fig_sc;
}

TEST_CASE("deferred adversarial pattern defeats the suspension-blind bound") {
    // two tasks whose suspension-blind analysis accepts the second task
    TaskSet ts = validate_taskset({mk("t1", 4, 4, 8, 8, 1), mk("t2", 4, 0, 10, 10, 2)});
    Scenario sc = deferred_adversarial_scenario(ts, 2, TimeTicks(40));
    CHECK_NOTHROW(validate_scenario(ts, sc));

    // the victim sits after the longest higher-priority suspension
    const JobSpec* victim = nullptr;
    for (const JobSpec& j : sc.jobs)
        if (j.task_id == "t2")
            victim = &j;
    REQUIRE(victim != nullptr);
    CHECK(victim->release == TimeTicks(4));

    Trace tr = simulate(ts, sc);
    const JobSummary* vs = nullptr;
    for (const JobSummary& s : tr.jobs)
        if (s.task_id == "t2" && s.job_index == 0)
            vs = &s;
    REQUIRE(vs != nullptr);
    CHECK(vs->missed);
    CHECK(vs->completion == TimeTicks(15));
    CHECK(vs->deadline == TimeTicks(14));
}

TEST_CASE("adversarial release train stays sporadic") {
    TaskSet ts = example_set();
    for (unsigned rank = 1; rank <= 4; ++rank) {
        Scenario sc = deferred_adversarial_scenario(ts, rank, TimeTicks(200));
        CHECK_NOTHROW(validate_scenario(ts, sc));
    }
    CHECK_THROWS_AS(deferred_adversarial_scenario(ts, 5, TimeTicks(200)), RangeError);
}

TEST_CASE("the shipped fixture is legal and annotated") {
    auto [ts, sc] = figure1_fixture();
    CHECK_NOTHROW(validate_scenario(ts, sc));
    CHECK(sc.scale == 10);
    CHECK(sc.horizon == TimeTicks(240));
    CHECK(sc.annotations.at("t1") == 41);
    CHECK(sc.annotations.at("t2") == 60);
    CHECK(sc.annotations.at("t3") == 60);
    CHECK(sc.annotations.at("t4") == 70);
    CHECK(sc.annotations.at("f4") == 199);
    REQUIRE(ts.size() == 4);
    CHECK(ts.by_rank(1).wcet == TimeTicks(10));
    CHECK(ts.by_rank(2).max_suspension == TimeTicks(60));
    CHECK(ts.by_rank(4).period == TimeTicks(200));
}

TEST_CASE("task set generation hits the target and stays valid") {
    TasksetGenConfig cfg;
    cfg.n_tasks = 4;
    cfg.target_utilization = Rational(1, 2);
    cfg.n_sets = 5;
    cfg.seed = 9;
    std::vector<TaskSet> sets = generate_tasksets(cfg);
    REQUIRE(sets.size() == 5);
    for (const TaskSet& ts : sets) {
        REQUIRE(ts.size() == 4);
        CHECK(total_utilization(ts, 4) <= Rational(1));
        double u = total_utilization(ts, 4).to_double();
        CHECK(u == doctest::Approx(0.5).epsilon(0.02));
        for (const Task& t : ts) {
            CHECK(t.period.v >= cfg.min_period);
            CHECK(t.period.v <= cfg.max_period);
            CHECK(t.deadline == t.period);
            CHECK(t.max_suspension + t.wcet <= t.period);
        }
        // rate-monotonic rank order
        for (unsigned k = 2; k <= 4; ++k)
            CHECK(ts.by_rank(k - 1).period <= ts.by_rank(k).period);
    }
}

TEST_CASE("generation is seed-deterministic") {
    TasksetGenConfig cfg;
    cfg.n_tasks = 5;
    cfg.n_sets = 3;
    cfg.seed = 77;
    auto a = generate_tasksets(cfg);
    auto b = generate_tasksets(cfg);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(taskset_to_json(a[i]) == taskset_to_json(b[i]));
    cfg.seed = 78;
    auto c = generate_tasksets(cfg);
    CHECK(taskset_to_json(a[0]) != taskset_to_json(c[0]));
}

TEST_CASE("zero suspension ratio produces suspension-free sets") {
    TasksetGenConfig cfg;
    cfg.n_tasks = 5;
    cfg.n_sets = 4;
    cfg.seed = 3;
    cfg.suspension_ratio = 0.0;
    for (const TaskSet& ts : generate_tasksets(cfg))
        for (const Task& t : ts)
            CHECK(t.max_suspension == TimeTicks(0));
}

TEST_CASE("generation rejects impossible configurations") {
    TasksetGenConfig cfg;
    cfg.n_tasks = 0;
    CHECK_THROWS_AS(generate_tasksets(cfg), ValidationError);
    cfg.n_tasks = 3;
    cfg.target_utilization = Rational(3, 2);
    CHECK_THROWS_AS(generate_tasksets(cfg), ValidationError);
    cfg.target_utilization = Rational(1, 2);
    cfg.suspension_ratio = 1.5;
    CHECK_THROWS_AS(generate_tasksets(cfg), ValidationError);
    cfg.suspension_ratio = 0.5;
    cfg.min_period = 100;
    cfg.max_period = 50;
    CHECK_THROWS_AS(generate_tasksets(cfg), ValidationError);
}
