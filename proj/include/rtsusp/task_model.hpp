#pragma once

#include <string>
#include <vector>

#include "rtsusp/rational.hpp"
#include "rtsusp/time_ticks.hpp"

namespace rtsusp {

// sporadic self-suspending task; priority 1 is highest, 0 means unassigned
struct Task {
    std::string id;
    TimeTicks wcet;            // C, total execution budget per job
    TimeTicks max_suspension;  // S, total self-suspension budget per job
    TimeTicks period;          // T, minimum inter-release separation
    TimeTicks deadline;        // D, relative; C <= D <= T
    unsigned priority = 0;
};

// validated set: unique ids, priorities exactly 1..n, stored in rank order
class TaskSet {
public:
    std::size_t size() const { return tasks_.size(); }

    // k in 1..n, 1 = highest priority
    const Task& by_rank(unsigned k) const;

    // -1 when absent
    int rank_of(const std::string& id) const;

    const std::vector<Task>& tasks() const { return tasks_; }
    auto begin() const { return tasks_.begin(); }
    auto end() const { return tasks_.end(); }

private:
    friend TaskSet validate_taskset(std::vector<Task> raw);
    explicit TaskSet(std::vector<Task> tasks) : tasks_(std::move(tasks)) {}
    std::vector<Task> tasks_;
};

// checks every model invariant; errors name the task id and field
TaskSet validate_taskset(std::vector<Task> raw);

// rate-monotonic priorities: shorter period first, ties by ascending id
// so the result does not depend on input order; incoming priorities are
// ignored
TaskSet assign_rate_monotonic(std::vector<Task> raw);

// exact sum of C_i / T_i over ranks 1..upto_k
Rational total_utilization(const TaskSet& ts, unsigned upto_k);

// file format: {"tasks":[{"id","C","S","T","D","priority"},...]}
// D defaults to T; priorities must be given for all tasks or for none,
// and when absent rate-monotonic assignment is applied
TaskSet taskset_from_json(const std::string& text);
std::string taskset_to_json(const TaskSet& ts);
TaskSet load_taskset_file(const std::string& path);

} // namespace rtsusp
