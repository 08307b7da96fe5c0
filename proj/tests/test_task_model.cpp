#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <vector>

#include "rtsusp/task_model.hpp"

using namespace rtsusp;

namespace {

Task mk(const char* id, std::uint64_t c, std::uint64_t s, std::uint64_t t, std::uint64_t d,
        unsigned prio) {
    return Task{id, TimeTicks(c), TimeTicks(s), TimeTicks(t), TimeTicks(d), prio};
}

// the four-task example used across the analysis suite: (T, C, S) =
// (6,1,1), (10,1,6), (18,4,1), (20,5,0) with implicit deadlines
std::vector<Task> example_tasks() {
    return {mk("t1", 1, 1, 6, 6, 1), mk("t2", 1, 6, 10, 10, 2), mk("t3", 4, 1, 18, 18, 3),
            mk("t4", 5, 0, 20, 20, 4)};
}

} // namespace

TEST_CASE("validation accepts the example set and orders it by rank") {
    TaskSet ts = validate_taskset(example_tasks());
    REQUIRE(ts.size() == 4);
    CHECK(ts.by_rank(1).id == "t1");
    CHECK(ts.by_rank(4).id == "t4");
    CHECK(ts.by_rank(2).max_suspension == TimeTicks(6));
    CHECK(ts.rank_of("t3") == 3);
    CHECK(ts.rank_of("absent") == -1);
    CHECK_THROWS_AS(ts.by_rank(0), RangeError);
    CHECK_THROWS_AS(ts.by_rank(5), RangeError);
}

TEST_CASE("validation rejects broken sets") {
    auto base = example_tasks();

    SUBCASE("duplicate id") {
        base[1].id = "t1";
        CHECK_THROWS_AS(validate_taskset(base), ValidationError);
    }
    SUBCASE("priority gap") {
        base[3].priority = 6;
        CHECK_THROWS_AS(validate_taskset(base), ValidationError);
    }
    SUBCASE("duplicate priority") {
        base[3].priority = 1;
        CHECK_THROWS_AS(validate_taskset(base), ValidationError);
    }
    SUBCASE("zero wcet") {
        base[0].wcet = TimeTicks(0);
        CHECK_THROWS_AS(validate_taskset(base), ValidationError);
    }
    SUBCASE("wcet above deadline") {
        base[0].wcet = TimeTicks(7);
        CHECK_THROWS_AS(validate_taskset(base), ValidationError);
    }
    SUBCASE("deadline above period") {
        base[0].deadline = TimeTicks(9);
        CHECK_THROWS_AS(validate_taskset(base), ValidationError);
    }
    SUBCASE("empty id") {
        base[2].id = "";
        CHECK_THROWS_AS(validate_taskset(base), ValidationError);
    }
    SUBCASE("empty set") {
        CHECK_THROWS_AS(validate_taskset({}), ValidationError);
    }
}

TEST_CASE("rate-monotonic assignment sorts by period, ties by id") {
    std::vector<Task> raw = {mk("b", 1, 0, 10, 10, 0), mk("a", 1, 0, 10, 10, 0),
                             mk("c", 1, 0, 5, 5, 0)};
    TaskSet ts = assign_rate_monotonic(raw);
    CHECK(ts.by_rank(1).id == "c");
    CHECK(ts.by_rank(2).id == "a");
    CHECK(ts.by_rank(3).id == "b");
    CHECK(ts.by_rank(1).priority == 1);
    CHECK(ts.by_rank(3).priority == 3);
}

TEST_CASE("utilization is exact") {
    TaskSet ts = validate_taskset(example_tasks());
    CHECK(total_utilization(ts, 1) == Rational(1, 6));
    CHECK(total_utilization(ts, 2) == Rational(4, 15));
    CHECK(total_utilization(ts, 3) == Rational(22, 45));
    CHECK(total_utilization(ts, 4) == Rational(22, 45) + Rational(1, 4));
    CHECK_THROWS_AS(total_utilization(ts, 5), RangeError);
}

TEST_CASE("json round trip") {
    TaskSet ts = validate_taskset(example_tasks());
    TaskSet back = taskset_from_json(taskset_to_json(ts));
    REQUIRE(back.size() == ts.size());
    for (unsigned k = 1; k <= 4; ++k) {
        CHECK(back.by_rank(k).id == ts.by_rank(k).id);
        CHECK(back.by_rank(k).wcet == ts.by_rank(k).wcet);
        CHECK(back.by_rank(k).max_suspension == ts.by_rank(k).max_suspension);
        CHECK(back.by_rank(k).period == ts.by_rank(k).period);
        CHECK(back.by_rank(k).deadline == ts.by_rank(k).deadline);
        CHECK(back.by_rank(k).priority == ts.by_rank(k).priority);
    }
}

TEST_CASE("json deadline defaults to period") {
    TaskSet ts = taskset_from_json(R"({"tasks":[
        {"id":"a","C":1,"S":0,"T":5},
        {"id":"b","C":2,"S":1,"T":8}
    ]})");
    CHECK(ts.by_rank(1).deadline == TimeTicks(5));
    CHECK(ts.by_rank(2).deadline == TimeTicks(8));
    // no priorities given: rate-monotonic assignment kicks in
    CHECK(ts.by_rank(1).id == "a");
}

TEST_CASE("json rejects malformed input") {
    CHECK_THROWS_AS(taskset_from_json("{bad"), InputError);
    CHECK_THROWS_AS(taskset_from_json(R"({"tasks":[]})"), ValidationError);
    CHECK_THROWS_AS(taskset_from_json(R"({"tasks":[{"id":"a","C":1,"T":5,"S":0,"X":1}]})"),
                    InputError);
    CHECK_THROWS_AS(taskset_from_json(R"({"tasks":{}, "extra":1})"), InputError);
    // priorities must cover every task or none
    CHECK_THROWS_AS(taskset_from_json(R"({"tasks":[
        {"id":"a","C":1,"S":0,"T":5,"priority":1},
        {"id":"b","C":1,"S":0,"T":6}
    ]})"),
                    InputError);
    CHECK_THROWS_AS(taskset_from_json(R"({"tasks":[{"id":"a","C":-1,"S":0,"T":5}]})"),
                    InputError);
}

TEST_CASE("missing file is an input error") {
    CHECK_THROWS_AS(load_taskset_file("/nonexistent/nowhere.json"), InputError);
}
