#include "rtsusp/task_model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace rtsusp {

using json = nlohmann::ordered_json;

const Task& TaskSet::by_rank(unsigned k) const {
    if (k == 0 || k > tasks_.size())
        throw RangeError("rank " + std::to_string(k) + " out of range 1.." +
                         std::to_string(tasks_.size()));
    return tasks_[k - 1];
}

int TaskSet::rank_of(const std::string& id) const {
    for (std::size_t i = 0; i < tasks_.size(); ++i)
        if (tasks_[i].id == id)
            return static_cast<int>(i) + 1;
    return -1;
}

TaskSet validate_taskset(std::vector<Task> raw) {
    if (raw.empty())
        throw ValidationError("task set is empty");

    std::set<std::string> ids;
    for (const Task& t : raw) {
        if (t.id.empty())
            throw ValidationError("task with empty id");
        if (!ids.insert(t.id).second)
            throw ValidationError("duplicate task id '" + t.id + "'");
        if (t.wcet.v == 0)
            throw ValidationError("task '" + t.id + "': C must be >= 1");
        if (t.period.v == 0)
            throw ValidationError("task '" + t.id + "': T must be >= 1");
        if (t.deadline.v == 0)
            throw ValidationError("task '" + t.id + "': D must be >= 1");
        if (t.deadline > t.period)
            throw ValidationError("task '" + t.id + "': D exceeds T");
        if (t.wcet > t.deadline)
            throw ValidationError("task '" + t.id + "': C exceeds D");
        if (t.priority == 0)
            throw ValidationError("task '" + t.id + "': missing priority");
    }

    // priorities must be exactly 1..n
    std::vector<Task> sorted(raw.begin(), raw.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const Task& a, const Task& b) { return a.priority < b.priority; });
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i].priority == sorted[i + 1].priority)
            throw ValidationError("duplicate priority " + std::to_string(sorted[i].priority) +
                                  " on tasks '" + sorted[i].id + "' and '" + sorted[i + 1].id + "'");
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i].priority != i + 1)
            throw ValidationError("task '" + sorted[i].id + "': priority " +
                                  std::to_string(sorted[i].priority) +
                                  " breaks the contiguous range 1.." +
                                  std::to_string(sorted.size()));

    return TaskSet(std::move(sorted));
}

TaskSet assign_rate_monotonic(std::vector<Task> raw) {
    std::stable_sort(raw.begin(), raw.end(), [](const Task& a, const Task& b) {
        if (a.period != b.period)
            return a.period < b.period;
        return a.id < b.id;
    });
    for (std::size_t i = 0; i < raw.size(); ++i)
        raw[i].priority = static_cast<unsigned>(i) + 1;
    return validate_taskset(std::move(raw));
}

Rational total_utilization(const TaskSet& ts, unsigned upto_k) {
    if (upto_k == 0 || upto_k > ts.size())
        throw RangeError("rank " + std::to_string(upto_k) + " out of range 1.." +
                         std::to_string(ts.size()));
    Rational sum;
    for (unsigned k = 1; k <= upto_k; ++k) {
        const Task& t = ts.by_rank(k);
        if (t.wcet.v > static_cast<std::uint64_t>(INT64_MAX) ||
            t.period.v > static_cast<std::uint64_t>(INT64_MAX))
            throw OverflowError("task '" + t.id + "': parameters exceed utilization range");
        sum = sum + Rational(static_cast<std::int64_t>(t.wcet.v),
                             static_cast<std::int64_t>(t.period.v));
    }
    return sum;
}

namespace {

std::uint64_t integer_field(const json& obj, const std::string& id, const char* key) {
    const json& v = obj.at(key);
    if (v.is_number_unsigned())
        return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw InputError("task '" + id + "': field '" + key + "' must be a non-negative integer");
}

} // namespace

TaskSet taskset_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("task set is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("tasks") || !root["tasks"].is_array())
        throw InputError("task set must be an object with a 'tasks' array");
    for (auto& [key, _] : root.items())
        if (key != "tasks" && key != "notes")
            throw InputError("task set: unknown top-level field '" + key + "'");

    std::vector<Task> tasks;
    std::size_t with_priority = 0;
    for (const json& jt : root["tasks"]) {
        if (!jt.is_object())
            throw InputError("task entries must be objects");
        std::string id = jt.contains("id") && jt["id"].is_string()
                             ? jt["id"].get<std::string>()
                             : throw InputError("task entry without a string 'id'");
        for (auto& [key, _] : jt.items()) {
            if (key != "id" && key != "C" && key != "S" && key != "T" && key != "D" &&
                key != "priority")
                throw InputError("task '" + id + "': unknown field '" + key + "'");
        }
        for (const char* req : {"C", "S", "T"})
            if (!jt.contains(req))
                throw InputError("task '" + id + "': missing field '" + req + "'");

        Task t;
        t.id = id;
        t.wcet = TimeTicks(integer_field(jt, id, "C"));
        t.max_suspension = TimeTicks(integer_field(jt, id, "S"));
        t.period = TimeTicks(integer_field(jt, id, "T"));
        t.deadline = jt.contains("D") ? TimeTicks(integer_field(jt, id, "D")) : t.period;
        if (jt.contains("priority")) {
            std::uint64_t p = integer_field(jt, id, "priority");
            if (p == 0 || p > UINT32_MAX)
                throw InputError("task '" + id + "': priority out of range");
            t.priority = static_cast<unsigned>(p);
            ++with_priority;
        }
        tasks.push_back(std::move(t));
    }

    if (with_priority == 0)
        return assign_rate_monotonic(std::move(tasks));
    if (with_priority != tasks.size())
        throw InputError("task set: priorities must be given for all tasks or for none");
    return validate_taskset(std::move(tasks));
}

std::string taskset_to_json(const TaskSet& ts) {
    json root;
    root["tasks"] = json::array();
    for (const Task& t : ts) {
        json jt;
        jt["id"] = t.id;
        jt["C"] = t.wcet.v;
        jt["S"] = t.max_suspension.v;
        jt["T"] = t.period.v;
        jt["D"] = t.deadline.v;
        jt["priority"] = t.priority;
        root["tasks"].push_back(std::move(jt));
    }
    return root.dump(2) + "\n";
}

TaskSet load_taskset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open task set file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return taskset_from_json(buf.str());
    } catch (const Error& e) {
        throw InputError("file '" + path + "': " + e.what());
    }
}

} // namespace rtsusp
