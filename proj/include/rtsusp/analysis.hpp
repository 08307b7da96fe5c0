#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rtsusp/task_model.hpp"

namespace rtsusp {

enum class TestKind { TdaSuspension, UtilRm, TdaNaive, TdaOblivious };

const char* test_name(TestKind t);
TestKind test_from_name(const std::string& name);

enum class Outcome { Schedulable, NotSchedulable, NotVerified };

const char* outcome_name(Outcome o);
Outcome outcome_from_name(const std::string& name);

// B_k = S_k + sum over higher-priority tasks of min(C_i, S_i)
struct BlockingBreakdown {
    TimeTicks own_suspension;                                  // S_k
    std::vector<std::pair<std::string, TimeTicks>> per_task;   // (id, min(C_i, S_i))
    TimeTicks total;                                           // B_k
};

// split of the tasks above rank k: t1 with C_i >= S_i, t2 with C_i < S_i
struct TaskClassification {
    std::set<std::string> t1_members;
    std::set<std::string> t2_members;
};

struct TestVerdict {
    std::string task_id;
    TestKind test = TestKind::TdaSuspension;
    Outcome outcome = Outcome::NotVerified;
    std::optional<TimeTicks> response_bound;       // tda tests, schedulable only
    std::optional<BlockingBreakdown> blocking;     // tests that charge B_k
    bool unsound = false;                          // true only for tda-naive
    std::optional<double> margin;                  // util-rm: |LHS - RHS|
    bool borderline = false;                       // util-rm: margin < 1e-9
};

// min(C, S) of one task
TimeTicks blocking_term(const Task& t);

BlockingBreakdown blocking_time(const TaskSet& ts, unsigned k);

TaskClassification classify(const TaskSet& ts, unsigned k);

// time-demand test that charges suspensions as blocking: least t > 0 with
//   C_k + B_k + sum_{i<k} ceil(t/T_i) C_i <= t,
// found by fixed-point iteration from t = C_k + B_k, abandoned once t > D_k
TestVerdict tda_suspension_test(const TaskSet& ts, unsigned k);

// k(2^{1/k} - 1), the rate-monotonic utilization threshold for k tasks
double rm_utilization_bound(unsigned k);

// rate-monotonic utilization bound with blocking folded into rank k:
//   (C_k + B_k)/T_k + sum_{i<k} C_i/T_i <= k(2^{1/k} - 1)
// requires D_i = T_i and rate-monotonic priority order over ranks 1..k
TestVerdict rm_utilization_test(const TaskSet& ts, unsigned k);

// classic time-demand test that ignores suspensions entirely; unsound for
// self-suspending tasks and kept as a counterexample-search target
TestVerdict tda_naive_test(const TaskSet& ts, unsigned k);

// sound coarse test that treats every suspension as execution:
// C_i replaced by C_i + S_i for all i <= k
TestVerdict tda_oblivious_test(const TaskSet& ts, unsigned k);

using AnalysisReport = std::vector<TestVerdict>;

// per rank, ascending; once a rank fails, every lower rank is reported
// not-verified because its interference assumptions no longer hold
AnalysisReport analyze_taskset(const TaskSet& ts, TestKind test);

std::string report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const std::string& text);
std::string report_to_table(const TaskSet& ts, const AnalysisReport& report);

} // namespace rtsusp
