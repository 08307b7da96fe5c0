#include "rtsusp/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace rtsusp {

using json = nlohmann::ordered_json;

const char* test_name(TestKind t) {
    switch (t) {
    case TestKind::TdaSuspension: return "tda-suspension";
    case TestKind::UtilRm: return "util-rm";
    case TestKind::TdaNaive: return "tda-naive";
    case TestKind::TdaOblivious: return "tda-oblivious";
    }
    throw RangeError("unknown test kind");
}

TestKind test_from_name(const std::string& name) {
    if (name == "tda-suspension") return TestKind::TdaSuspension;
    if (name == "util-rm") return TestKind::UtilRm;
    if (name == "tda-naive") return TestKind::TdaNaive;
    if (name == "tda-oblivious") return TestKind::TdaOblivious;
    throw InputError("unknown test '" + name +
                     "' (expected tda-suspension, util-rm, tda-naive or tda-oblivious)");
}

const char* outcome_name(Outcome o) {
    switch (o) {
    case Outcome::Schedulable: return "schedulable";
    case Outcome::NotSchedulable: return "not-schedulable";
    case Outcome::NotVerified: return "not-verified";
    }
    throw RangeError("unknown outcome");
}

Outcome outcome_from_name(const std::string& name) {
    if (name == "schedulable") return Outcome::Schedulable;
    if (name == "not-schedulable") return Outcome::NotSchedulable;
    if (name == "not-verified") return Outcome::NotVerified;
    throw InputError("unknown outcome '" + name + "'");
}

TimeTicks blocking_term(const Task& t) {
    return t.wcet < t.max_suspension ? t.wcet : t.max_suspension;
}

BlockingBreakdown blocking_time(const TaskSet& ts, unsigned k) {
    const Task& task = ts.by_rank(k);
    BlockingBreakdown b;
    b.own_suspension = task.max_suspension;
    b.total = task.max_suspension;
    for (unsigned i = 1; i < k; ++i) {
        const Task& hp = ts.by_rank(i);
        TimeTicks term = blocking_term(hp);
        b.per_task.emplace_back(hp.id, term);
        b.total += term;
    }
    return b;
}

TaskClassification classify(const TaskSet& ts, unsigned k) {
    ts.by_rank(k); // range check
    TaskClassification c;
    for (unsigned i = 1; i < k; ++i) {
        const Task& hp = ts.by_rank(i);
        if (hp.wcet >= hp.max_suspension)
            c.t1_members.insert(hp.id);
        else
            c.t2_members.insert(hp.id);
    }
    return c;
}

namespace {

// least fixed point of t = base + sum_{i<k} ceil(t/T_i) * C_i, where the
// interference wcet of rank i is supplied by the caller; gives up once the
// iterate passes D_k
struct FixedPoint {
    bool schedulable = false;
    TimeTicks bound;
};

FixedPoint least_fixed_point(const TaskSet& ts, unsigned k, TimeTicks base,
                             const std::vector<TimeTicks>& hp_wcet) {
    const Task& task = ts.by_rank(k);
    TimeTicks t = base;
    while (t <= task.deadline) {
        TimeTicks demand = base;
        for (unsigned i = 1; i < k; ++i)
            demand += ceil_div(t, ts.by_rank(i).period) * hp_wcet[i - 1];
        if (demand == t)
            return {true, t};
        t = demand;
    }
    return {false, TimeTicks(0)};
}

} // namespace

TestVerdict tda_suspension_test(const TaskSet& ts, unsigned k) {
    const Task& task = ts.by_rank(k);
    TestVerdict v;
    v.task_id = task.id;
    v.test = TestKind::TdaSuspension;
    v.blocking = blocking_time(ts, k);

    std::vector<TimeTicks> hp_wcet;
    for (unsigned i = 1; i < k; ++i)
        hp_wcet.push_back(ts.by_rank(i).wcet);
    FixedPoint fp = least_fixed_point(ts, k, task.wcet + v.blocking->total, hp_wcet);
    if (fp.schedulable) {
        v.outcome = Outcome::Schedulable;
        v.response_bound = fp.bound;
    } else {
        v.outcome = Outcome::NotSchedulable;
    }
    return v;
}

TestVerdict tda_naive_test(const TaskSet& ts, unsigned k) {
    const Task& task = ts.by_rank(k);
    TestVerdict v;
    v.task_id = task.id;
    v.test = TestKind::TdaNaive;
    v.unsound = true;

    std::vector<TimeTicks> hp_wcet;
    for (unsigned i = 1; i < k; ++i)
        hp_wcet.push_back(ts.by_rank(i).wcet);
    FixedPoint fp = least_fixed_point(ts, k, task.wcet, hp_wcet);
    if (fp.schedulable) {
        v.outcome = Outcome::Schedulable;
        v.response_bound = fp.bound;
    } else {
        v.outcome = Outcome::NotSchedulable;
    }
    return v;
}

TestVerdict tda_oblivious_test(const TaskSet& ts, unsigned k) {
    const Task& task = ts.by_rank(k);
    TestVerdict v;
    v.task_id = task.id;
    v.test = TestKind::TdaOblivious;

    std::vector<TimeTicks> hp_wcet;
    for (unsigned i = 1; i < k; ++i) {
        const Task& hp = ts.by_rank(i);
        hp_wcet.push_back(hp.wcet + hp.max_suspension);
    }
    FixedPoint fp = least_fixed_point(ts, k, task.wcet + task.max_suspension, hp_wcet);
    if (fp.schedulable) {
        v.outcome = Outcome::Schedulable;
        v.response_bound = fp.bound;
    } else {
        v.outcome = Outcome::NotSchedulable;
    }
    return v;
}

double rm_utilization_bound(unsigned k) {
    if (k == 0)
        throw RangeError("rank k out of range 1..n");
    return k * (std::pow(2.0, 1.0 / k) - 1.0);
}

TestVerdict rm_utilization_test(const TaskSet& ts, unsigned k) {
    const Task& task = ts.by_rank(k);
    for (unsigned i = 1; i <= k; ++i) {
        const Task& t = ts.by_rank(i);
        if (t.deadline != t.period)
            throw ValidationError("task '" + t.id +
                                  "': utilization test needs D = T (implicit deadlines)");
        if (i > 1 && ts.by_rank(i - 1).period > t.period)
            throw ValidationError("task '" + t.id +
                                  "': priorities are not rate-monotonic (period shorter than rank " +
                                  std::to_string(i - 1) + ")");
    }

    TestVerdict v;
    v.task_id = task.id;
    v.test = TestKind::UtilRm;
    v.blocking = blocking_time(ts, k);

    TimeTicks inflated = task.wcet + v.blocking->total;
    if (inflated.v > static_cast<std::uint64_t>(INT64_MAX))
        throw OverflowError("task '" + task.id + "': C + B exceeds utilization range");
    Rational lhs(static_cast<std::int64_t>(inflated.v), static_cast<std::int64_t>(task.period.v));
    for (unsigned i = 1; i < k; ++i) {
        const Task& hp = ts.by_rank(i);
        lhs = lhs + Rational(static_cast<std::int64_t>(hp.wcet.v),
                             static_cast<std::int64_t>(hp.period.v));
    }

    double bound = rm_utilization_bound(k);
    double lhs_d = lhs.to_double();
    v.margin = std::fabs(lhs_d - bound);
    v.borderline = *v.margin < 1e-9;
    v.outcome = lhs_d <= bound ? Outcome::Schedulable : Outcome::NotSchedulable;
    return v;
}

AnalysisReport analyze_taskset(const TaskSet& ts, TestKind test) {
    AnalysisReport report;
    bool failed_above = false;
    for (unsigned k = 1; k <= ts.size(); ++k) {
        if (failed_above) {
            // a failed higher-priority rank invalidates the interference
            // assumptions below it, so no claim is made either way
            TestVerdict v;
            v.task_id = ts.by_rank(k).id;
            v.test = test;
            v.outcome = Outcome::NotVerified;
            if (test == TestKind::TdaSuspension || test == TestKind::UtilRm)
                v.blocking = blocking_time(ts, k);
            if (test == TestKind::TdaNaive)
                v.unsound = true;
            report.push_back(std::move(v));
            continue;
        }
        TestVerdict v;
        switch (test) {
        case TestKind::TdaSuspension: v = tda_suspension_test(ts, k); break;
        case TestKind::UtilRm: v = rm_utilization_test(ts, k); break;
        case TestKind::TdaNaive: v = tda_naive_test(ts, k); break;
        case TestKind::TdaOblivious: v = tda_oblivious_test(ts, k); break;
        }
        if (v.outcome == Outcome::NotSchedulable)
            failed_above = true;
        report.push_back(std::move(v));
    }
    return report;
}

std::string report_to_json(const AnalysisReport& report) {
    json arr = json::array();
    for (const TestVerdict& v : report) {
        json jv;
        jv["id"] = v.task_id;
        jv["test"] = test_name(v.test);
        jv["outcome"] = outcome_name(v.outcome);
        if (v.response_bound)
            jv["response_bound"] = v.response_bound->v;
        if (v.blocking) {
            jv["B_k"] = v.blocking->total.v;
            json terms = json::array();
            for (const auto& [id, ticks] : v.blocking->per_task)
                terms.push_back(json::array({id, ticks.v}));
            jv["terms"] = std::move(terms);
        }
        if (v.test == TestKind::UtilRm) {
            jv["borderline"] = v.borderline;
            if (v.margin)
                jv["margin"] = *v.margin;
        }
        if (v.unsound)
            jv["unsound"] = true;
        arr.push_back(std::move(jv));
    }
    return arr.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& text) {
    json arr;
    try {
        arr = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!arr.is_array())
        throw InputError("report must be a JSON array of verdicts");
    AnalysisReport report;
    for (const json& jv : arr) {
        TestVerdict v;
        v.task_id = jv.at("id").get<std::string>();
        v.test = test_from_name(jv.at("test").get<std::string>());
        v.outcome = outcome_from_name(jv.at("outcome").get<std::string>());
        if (jv.contains("response_bound"))
            v.response_bound = TimeTicks(jv["response_bound"].get<std::uint64_t>());
        if (jv.contains("B_k")) {
            BlockingBreakdown b;
            b.total = TimeTicks(jv["B_k"].get<std::uint64_t>());
            if (jv.contains("terms"))
                for (const json& term : jv["terms"])
                    b.per_task.emplace_back(term.at(0).get<std::string>(),
                                            TimeTicks(term.at(1).get<std::uint64_t>()));
            TimeTicks hp_sum;
            for (const auto& [_, ticks] : b.per_task)
                hp_sum += ticks;
            b.own_suspension = b.total - hp_sum;
            v.blocking = std::move(b);
        }
        if (jv.contains("borderline"))
            v.borderline = jv["borderline"].get<bool>();
        if (jv.contains("margin"))
            v.margin = jv["margin"].get<double>();
        if (jv.contains("unsound"))
            v.unsound = jv["unsound"].get<bool>();
        report.push_back(std::move(v));
    }
    return report;
}

std::string report_to_table(const TaskSet& ts, const AnalysisReport& report) {
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-4s %-12s %-15s %-15s %12s %12s %10s\n", "rank", "id",
                  "test", "outcome", "bound", "D", "B_k");
    out << line;
    for (std::size_t i = 0; i < report.size(); ++i) {
        const TestVerdict& v = report[i];
        std::string bound = v.response_bound ? std::to_string(v.response_bound->v) : "-";
        std::string bk = v.blocking ? std::to_string(v.blocking->total.v) : "-";
        std::string deadline = i < ts.size() ? std::to_string(ts.by_rank(static_cast<unsigned>(i) + 1).deadline.v) : "-";
        std::snprintf(line, sizeof line, "%-4zu %-12s %-15s %-15s %12s %12s %10s\n", i + 1,
                      v.task_id.c_str(), test_name(v.test), outcome_name(v.outcome), bound.c_str(),
                      deadline.c_str(), bk.c_str());
        out << line;
    }
    return out.str();
}

} // namespace rtsusp
