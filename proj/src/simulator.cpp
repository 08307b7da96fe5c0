#include "rtsusp/simulator.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace rtsusp {

using json = nlohmann::ordered_json;

const char* event_name(EventKind k) {
    switch (k) {
    case EventKind::Release: return "release";
    case EventKind::StartExec: return "start-exec";
    case EventKind::Preempt: return "preempt";
    case EventKind::ResumeExec: return "resume-exec";
    case EventKind::SuspendBegin: return "suspend-begin";
    case EventKind::SuspendEnd: return "suspend-end";
    case EventKind::Complete: return "complete";
    case EventKind::DeadlineMiss: return "deadline-miss";
    case EventKind::IdleBegin: return "idle-begin";
    case EventKind::IdleEnd: return "idle-end";
    }
    throw RangeError("unknown event kind");
}

EventKind event_from_name(const std::string& name) {
    static const std::pair<const char*, EventKind> table[] = {
        {"release", EventKind::Release},
        {"start-exec", EventKind::StartExec},
        {"preempt", EventKind::Preempt},
        {"resume-exec", EventKind::ResumeExec},
        {"suspend-begin", EventKind::SuspendBegin},
        {"suspend-end", EventKind::SuspendEnd},
        {"complete", EventKind::Complete},
        {"deadline-miss", EventKind::DeadlineMiss},
        {"idle-begin", EventKind::IdleBegin},
        {"idle-end", EventKind::IdleEnd},
    };
    for (const auto& [n, k] : table)
        if (name == n)
            return k;
    throw InputError("unknown event kind '" + name + "'");
}

std::vector<Segment> normalize_segments(std::vector<Segment> raw) {
    std::vector<Segment> out;
    for (const Segment& s : raw) {
        if (s.length.v == 0)
            continue;
        if (!out.empty() && out.back().kind == s.kind)
            out.back().length += s.length;
        else
            out.push_back(s);
    }
    if (out.empty())
        throw ValidationError("job has no execution segments");
    if (out.front().kind != SegmentKind::Exec)
        throw ValidationError("job segments must begin with an execution segment");
    if (out.back().kind != SegmentKind::Exec)
        throw ValidationError("job segments must end with an execution segment");
    return out;
}

void validate_scenario(const TaskSet& ts, const Scenario& sc) {
    std::map<std::string, const JobSpec*> last_of_task;
    std::map<std::string, std::size_t> count_of_task;
    for (const JobSpec& job : sc.jobs) {
        int rank = ts.rank_of(job.task_id);
        if (rank < 0)
            throw ValidationError("scenario references unknown task '" + job.task_id + "'");
        const Task& task = ts.by_rank(static_cast<unsigned>(rank));
        std::size_t index = count_of_task[job.task_id]++;
        const std::string where = "task '" + job.task_id + "' job " + std::to_string(index);

        std::vector<Segment> segs;
        try {
            segs = normalize_segments(job.segments);
        } catch (const Error& e) {
            throw ValidationError(where + ": " + e.what());
        }
        TimeTicks exec_total, susp_total;
        for (const Segment& s : segs) {
            if (s.kind == SegmentKind::Exec)
                exec_total += s.length;
            else
                susp_total += s.length;
        }
        if (exec_total != task.wcet)
            throw ValidationError(where + ": execution segments total " +
                                  std::to_string(exec_total.v) + ", C is " +
                                  std::to_string(task.wcet.v));
        if (susp_total > task.max_suspension)
            throw ValidationError(where + ": suspension segments total " +
                                  std::to_string(susp_total.v) + ", S is " +
                                  std::to_string(task.max_suspension.v));

        if (job.release >= sc.horizon)
            throw ValidationError(where + ": release " + std::to_string(job.release.v) +
                                  " is not below the horizon " + std::to_string(sc.horizon.v));
        // whole job span and absolute deadline must stay representable
        TimeTicks span = job.release;
        for (const Segment& s : segs)
            span += s.length;
        (void)(job.release + task.deadline);
        (void)span;

        auto it = last_of_task.find(job.task_id);
        if (it != last_of_task.end()) {
            const JobSpec* prev = it->second;
            if (job.release < prev->release + task.period)
                throw ValidationError(where + ": release " + std::to_string(job.release.v) +
                                      " violates the sporadic separation T = " +
                                      std::to_string(task.period.v) + " after release " +
                                      std::to_string(prev->release.v));
        }
        last_of_task[job.task_id] = &job;
    }
}

namespace {

enum SimPhase { PhSuspendEnd = 0, PhRelease = 1, PhDeadline = 2 };

struct SimJob {
    std::vector<Segment> segs;
    std::size_t job_idx = 0;
    std::size_t seg = 0;
    std::uint64_t seg_left = 0;
    enum class St { Future, Blocked, Ready, Running, Suspended, Done };
    St st = St::Future;
    std::uint64_t executed = 0;
    std::uint64_t suspended = 0;
    std::uint64_t release = 0;
    std::uint64_t deadline = 0;
    std::optional<std::uint64_t> completion;
    bool missed = false;
    bool ever_ran = false;
};

// heap entries pop in (time, completions/expiries then releases then
// deadline checks, task priority, job index) order
using HeapEntry = std::tuple<std::uint64_t, int, std::size_t, std::size_t>;

} // namespace

Trace simulate(const TaskSet& ts, const Scenario& sc) {
    validate_scenario(ts, sc);
    const std::uint64_t horizon = sc.horizon.v;
    const std::size_t ntasks = ts.size();

    std::vector<std::vector<SimJob>> jobs(ntasks);
    for (const JobSpec& spec : sc.jobs) {
        std::size_t ti = static_cast<std::size_t>(ts.rank_of(spec.task_id)) - 1;
        SimJob j;
        j.segs = normalize_segments(spec.segments);
        j.job_idx = jobs[ti].size();
        j.release = spec.release.v;
        j.deadline = (spec.release + ts.by_rank(static_cast<unsigned>(ti) + 1).deadline).v;
        jobs[ti].push_back(std::move(j));
    }

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>> q;
    for (std::size_t ti = 0; ti < ntasks; ++ti)
        for (std::size_t ji = 0; ji < jobs[ti].size(); ++ji) {
            q.emplace(jobs[ti][ji].release, PhRelease, ti, ji);
            if (jobs[ti][ji].deadline <= horizon)
                q.emplace(jobs[ti][ji].deadline, PhDeadline, ti, ji);
        }

    Trace tr;
    tr.horizon = sc.horizon;
    auto emit = [&](std::uint64_t t, EventKind kind, std::size_t ti, std::size_t ji) {
        tr.events.push_back(
            {TimeTicks(t), kind, ts.by_rank(static_cast<unsigned>(ti) + 1).id, ji});
    };
    auto emit_idle = [&](std::uint64_t t, EventKind kind) {
        tr.events.push_back({TimeTicks(t), kind, std::string(), 0});
    };
    auto add_exec = [&](std::uint64_t from, std::uint64_t to, std::size_t ti, std::size_t ji) {
        const std::string& id = ts.by_rank(static_cast<unsigned>(ti) + 1).id;
        if (!tr.exec.empty() && tr.exec.back().to.v == from && tr.exec.back().task_id == id &&
            tr.exec.back().job_index == ji)
            tr.exec.back().to = TimeTicks(to);
        else
            tr.exec.push_back({TimeTicks(from), TimeTicks(to), id, ji});
    };

    // cursor[ti]: first job of the task that has not completed yet
    std::vector<std::size_t> cursor(ntasks, 0);
    std::size_t running_t = SIZE_MAX, running_j = SIZE_MAX;
    std::optional<std::uint64_t> idle_since;
    std::uint64_t now = 0;

    if (horizon > 0 && (q.empty() || std::get<0>(q.top()) > 0)) {
        emit_idle(0, EventKind::IdleBegin);
        idle_since = 0;
    }

    while (true) {
        std::uint64_t t_evt = q.empty() ? UINT64_MAX : std::get<0>(q.top());
        std::uint64_t t_run = UINT64_MAX;
        if (running_t != SIZE_MAX)
            t_run = now + jobs[running_t][running_j].seg_left;
        std::uint64_t t_next = std::min({t_evt, t_run, horizon});

        if (running_t != SIZE_MAX && t_next > now) {
            SimJob& j = jobs[running_t][running_j];
            add_exec(now, t_next, running_t, running_j);
            j.executed += t_next - now;
            j.seg_left -= t_next - now;
        }
        now = t_next;

        // 1. running segment boundary
        if (running_t != SIZE_MAX && jobs[running_t][running_j].seg_left == 0) {
            SimJob& j = jobs[running_t][running_j];
            j.seg++;
            if (j.seg == j.segs.size()) {
                emit(now, EventKind::Complete, running_t, running_j);
                j.st = SimJob::St::Done;
                j.completion = now;
                cursor[running_t]++;
                // a released successor was waiting on this completion
                if (cursor[running_t] < jobs[running_t].size()) {
                    SimJob& next = jobs[running_t][cursor[running_t]];
                    if (next.st == SimJob::St::Blocked)
                        next.st = SimJob::St::Ready;
                }
            } else {
                // grammar guarantees a suspension follows
                std::uint64_t s = j.segs[j.seg].length.v;
                emit(now, EventKind::SuspendBegin, running_t, running_j);
                j.st = SimJob::St::Suspended;
                j.suspended += std::min(s, horizon - now);
                std::uint64_t wake = (TimeTicks(now) + TimeTicks(s)).v;
                if (wake <= horizon)
                    q.emplace(wake, PhSuspendEnd, running_t, running_j);
            }
            running_t = running_j = SIZE_MAX;
        }

        // 2. queued events at this instant, deterministic order
        while (!q.empty() && std::get<0>(q.top()) == now) {
            auto [t, phase, ti, ji] = q.top();
            q.pop();
            SimJob& j = jobs[ti][ji];
            if (phase == PhSuspendEnd) {
                emit(now, EventKind::SuspendEnd, ti, ji);
                j.seg++;
                j.seg_left = j.segs[j.seg].length.v;
                j.st = SimJob::St::Ready;
            } else if (phase == PhRelease) {
                emit(now, EventKind::Release, ti, ji);
                j.seg = 0;
                j.seg_left = j.segs[0].length.v;
                j.st = ji == cursor[ti] ? SimJob::St::Ready : SimJob::St::Blocked;
            } else {
                if (j.st != SimJob::St::Done) {
                    emit(now, EventKind::DeadlineMiss, ti, ji);
                    j.missed = true;
                }
            }
        }

        if (now == horizon)
            break;

        // 3. scheduling decision: highest-priority eligible job
        std::size_t best = SIZE_MAX;
        for (std::size_t ti = 0; ti < ntasks; ++ti) {
            if (cursor[ti] >= jobs[ti].size())
                continue;
            SimJob::St st = jobs[ti][cursor[ti]].st;
            if (st == SimJob::St::Ready || st == SimJob::St::Running) {
                best = ti;
                break;
            }
        }
        if (best != running_t) {
            if (running_t != SIZE_MAX) {
                emit(now, EventKind::Preempt, running_t, running_j);
                jobs[running_t][running_j].st = SimJob::St::Ready;
                running_t = running_j = SIZE_MAX;
            }
            if (best != SIZE_MAX) {
                if (idle_since) {
                    emit_idle(now, EventKind::IdleEnd);
                    idle_since.reset();
                }
                SimJob& j = jobs[best][cursor[best]];
                emit(now, j.ever_ran ? EventKind::ResumeExec : EventKind::StartExec, best,
                     cursor[best]);
                j.ever_ran = true;
                j.st = SimJob::St::Running;
                running_t = best;
                running_j = cursor[best];
            }
        }

        // the processor just fell idle, whatever path led here
        if (running_t == SIZE_MAX && !idle_since) {
            emit_idle(now, EventKind::IdleBegin);
            idle_since = now;
        }

        if (q.empty() && running_t == SIZE_MAX)
            break;
    }

    if (idle_since)
        emit_idle(horizon, EventKind::IdleEnd);

    for (std::size_t ti = 0; ti < ntasks; ++ti)
        for (const SimJob& j : jobs[ti]) {
            JobSummary s;
            s.task_id = ts.by_rank(static_cast<unsigned>(ti) + 1).id;
            s.job_index = j.job_idx;
            s.release = TimeTicks(j.release);
            s.deadline = TimeTicks(j.deadline);
            if (j.completion)
                s.completion = TimeTicks(*j.completion);
            s.missed = j.missed;
            s.incomplete = !j.completion.has_value();
            s.executed = TimeTicks(j.executed);
            s.suspended = TimeTicks(j.suspended);
            tr.jobs.push_back(std::move(s));
        }
    return tr;
}

TimeTicks idle_time(const Trace& tr, TimeTicks from, TimeTicks to) {
    if (from > to || to > tr.horizon)
        throw RangeError("idle interval [" + std::to_string(from.v) + ", " +
                         std::to_string(to.v) + ") outside the trace horizon " +
                         std::to_string(tr.horizon.v));
    std::uint64_t busy = 0;
    for (const ExecInterval& iv : tr.exec) {
        std::uint64_t a = std::max(iv.from.v, from.v);
        std::uint64_t b = std::min(iv.to.v, to.v);
        if (a < b)
            busy += b - a;
    }
    return TimeTicks(to.v - from.v - busy);
}

namespace {

// per-job replay state used by the verifier
struct ReplayJob {
    enum class Ph { Unreleased, Pending, Exec, Preempted, Susp, SuspDone, Done } ph =
        Ph::Unreleased;
    std::uint64_t release = 0;
    std::uint64_t exec_since = 0;
    std::uint64_t susp_since = 0;
    std::uint64_t executed = 0;
    std::uint64_t suspended = 0;
    std::optional<std::uint64_t> completion;
    int misses = 0;
};

} // namespace

std::vector<Violation> verify_trace(const Trace& tr, const TaskSet& ts) {
    std::vector<Violation> out;
    auto flag = [&](const char* kind, std::uint64_t t, const std::string& id, std::size_t ji,
                    std::string detail) {
        out.push_back({kind, TimeTicks(t), id, ji, std::move(detail)});
    };

    std::uint64_t horizon = tr.horizon.v;
    std::uint64_t prev_t = 0;
    for (const TraceEvent& e : tr.events) {
        if (e.t.v < prev_t) {
            flag("unordered-events", e.t.v, e.task_id, e.job_index, "time went backwards");
            return out;
        }
        prev_t = e.t.v;
        if (e.t.v > horizon)
            flag("malformed-event-sequence", e.t.v, e.task_id, e.job_index,
                 "event beyond the horizon");
    }

    std::map<std::pair<std::string, std::size_t>, ReplayJob> js;
    // running job according to the events; SIZE_MAX marks none
    std::pair<std::string, std::size_t> running{"", SIZE_MAX};
    std::map<std::string, std::size_t> completed_of_task;

    // incrementally maintained set of eligible jobs, keyed by task rank: a
    // job is eligible when released, unfinished, not suspended and its
    // predecessor job has completed
    std::set<std::pair<int, std::pair<std::string, std::size_t>>> elig;
    auto elig_add = [&](const std::string& task, std::size_t ji) {
        elig.insert({ts.rank_of(task), {task, ji}});
    };
    auto elig_remove = [&](const std::string& task, std::size_t ji) {
        elig.erase({ts.rank_of(task), {task, ji}});
    };
    // persistent conditions would otherwise flood the report
    std::set<std::tuple<std::string, std::string, std::size_t>> flagged_once;
    auto flag_once = [&](const char* kind, std::uint64_t t, const std::string& id,
                         std::size_t ji, std::string detail) {
        if (flagged_once.insert({kind, id, ji}).second)
            flag(kind, t, id, ji, std::move(detail));
    };
    auto check_interval = [&](std::uint64_t a, std::uint64_t b) {
        if (a >= b || elig.empty())
            return;
        const auto& [best_rank, best_key] = *elig.begin();
        bool have_running = running.second != SIZE_MAX;
        if (!have_running)
            flag_once("non-work-conserving-idle", a, best_key.first, best_key.second,
                      "processor idle while a ready job waited");
        else if (best_key != running && best_rank < ts.rank_of(running.first))
            flag_once("priority-inversion", a, running.first, running.second,
                      "higher-priority ready job '" + best_key.first + "' was not executing");
    };

    std::size_t i = 0;
    while (i < tr.events.size()) {
        std::uint64_t t = tr.events[i].t.v;
        // events at one instant apply before the interval that follows them
        for (; i < tr.events.size() && tr.events[i].t.v == t; ++i) {
            const TraceEvent& e = tr.events[i];
            if (e.kind == EventKind::IdleBegin || e.kind == EventKind::IdleEnd)
                continue;
            int rank = ts.rank_of(e.task_id);
            if (rank < 0) {
                flag("malformed-event-sequence", t, e.task_id, e.job_index, "unknown task");
                continue;
            }
            ReplayJob& rj = js[{e.task_id, e.job_index}];
            auto bad = [&](const char* what) {
                flag("malformed-event-sequence", t, e.task_id, e.job_index, what);
            };
            switch (e.kind) {
            case EventKind::Release:
                if (rj.ph != ReplayJob::Ph::Unreleased)
                    bad("second release of the same job");
                rj.ph = ReplayJob::Ph::Pending;
                rj.release = t;
                if (completed_of_task[e.task_id] >= e.job_index)
                    elig_add(e.task_id, e.job_index);
                break;
            case EventKind::StartExec:
            case EventKind::ResumeExec: {
                bool first = e.kind == EventKind::StartExec;
                if (first && rj.ph != ReplayJob::Ph::Pending)
                    bad("start-exec out of order");
                if (!first && rj.ph != ReplayJob::Ph::Preempted &&
                    rj.ph != ReplayJob::Ph::SuspDone)
                    bad("resume-exec out of order");
                if (running.second != SIZE_MAX)
                    flag("overlapping-execution", t, e.task_id, e.job_index,
                         "'" + running.first + "' job " + std::to_string(running.second) +
                             " already executing");
                rj.ph = ReplayJob::Ph::Exec;
                rj.exec_since = t;
                running = {e.task_id, e.job_index};
                elig_add(e.task_id, e.job_index);
                break;
            }
            case EventKind::Preempt:
            case EventKind::SuspendBegin:
            case EventKind::Complete:
                if (rj.ph != ReplayJob::Ph::Exec ||
                    running != std::make_pair(e.task_id, e.job_index)) {
                    bad("stop event for a job that was not executing");
                    break;
                }
                rj.executed += t - rj.exec_since;
                running = {"", SIZE_MAX};
                if (e.kind == EventKind::Preempt) {
                    rj.ph = ReplayJob::Ph::Preempted;
                } else if (e.kind == EventKind::SuspendBegin) {
                    rj.ph = ReplayJob::Ph::Susp;
                    rj.susp_since = t;
                    elig_remove(e.task_id, e.job_index);
                } else {
                    rj.ph = ReplayJob::Ph::Done;
                    rj.completion = t;
                    completed_of_task[e.task_id] =
                        std::max(completed_of_task[e.task_id], e.job_index + 1);
                    elig_remove(e.task_id, e.job_index);
                    // a released successor was gated on this completion
                    auto nx = js.find({e.task_id, e.job_index + 1});
                    if (nx != js.end() && (nx->second.ph == ReplayJob::Ph::Pending ||
                                           nx->second.ph == ReplayJob::Ph::Preempted ||
                                           nx->second.ph == ReplayJob::Ph::SuspDone))
                        elig_add(e.task_id, e.job_index + 1);
                }
                break;
            case EventKind::SuspendEnd:
                if (rj.ph != ReplayJob::Ph::Susp) {
                    bad("suspend-end without suspend-begin");
                    break;
                }
                rj.suspended += t - rj.susp_since;
                rj.ph = ReplayJob::Ph::SuspDone;
                elig_add(e.task_id, e.job_index);
                break;
            case EventKind::DeadlineMiss:
                if (rj.ph == ReplayJob::Ph::Unreleased || rj.ph == ReplayJob::Ph::Done)
                    bad("deadline-miss outside the job's lifetime");
                rj.misses++;
                flag("deadline-miss", t, e.task_id, e.job_index, "");
                break;
            default:
                break;
            }
        }
        std::uint64_t t_next = i < tr.events.size() ? tr.events[i].t.v : horizon;
        check_interval(t, std::min(t_next, horizon));
    }

    // close open execution / suspension at the horizon
    for (auto& [key, rj] : js) {
        if (rj.ph == ReplayJob::Ph::Exec)
            rj.executed += horizon - rj.exec_since;
        if (rj.ph == ReplayJob::Ph::Susp)
            rj.suspended += horizon - rj.susp_since;
    }

    // budgets and summary agreement
    for (const JobSummary& s : tr.jobs) {
        int rank = ts.rank_of(s.task_id);
        if (rank < 0) {
            flag("summary-mismatch", 0, s.task_id, s.job_index, "unknown task in summary");
            continue;
        }
        const Task& task = ts.by_rank(static_cast<unsigned>(rank));
        auto it = js.find({s.task_id, s.job_index});
        if (it == js.end()) {
            flag("summary-mismatch", s.release.v, s.task_id, s.job_index,
                 "summary for a job with no events");
            continue;
        }
        const ReplayJob& rj = it->second;
        if (rj.completion && rj.executed != task.wcet.v)
            flag("wrong-execution-total", *rj.completion, s.task_id, s.job_index,
                 "executed " + std::to_string(rj.executed) + " of C = " +
                     std::to_string(task.wcet.v));
        if (rj.suspended > task.max_suspension.v)
            flag("suspension-overrun", rj.release, s.task_id, s.job_index,
                 "suspended " + std::to_string(rj.suspended) + " beyond S = " +
                     std::to_string(task.max_suspension.v));
        const std::uint64_t deadline = rj.release + task.deadline.v;
        bool should_miss = deadline <= horizon &&
                           (!rj.completion || *rj.completion > deadline);
        if (should_miss && rj.misses == 0)
            flag("deadline-accounting", deadline, s.task_id, s.job_index,
                 "deadline passed without a deadline-miss event");
        if (!should_miss && rj.misses > 0)
            flag("deadline-accounting", deadline, s.task_id, s.job_index,
                 "deadline-miss event for a job that met its deadline");
        if (s.release.v != rj.release || s.executed.v != rj.executed ||
            s.suspended.v != rj.suspended || s.missed != (rj.misses > 0) ||
            s.completion.has_value() != rj.completion.has_value() ||
            (s.completion && s.completion->v != *rj.completion))
            flag("summary-mismatch", rj.release, s.task_id, s.job_index,
                 "summary disagrees with the event stream");
    }
    return out;
}

std::string scenario_to_json(const Scenario& sc) {
    json root;
    root["scale"] = sc.scale;
    root["horizon"] = sc.horizon.v;
    if (!sc.annotations.empty()) {
        json ann;
        for (const auto& [k, v] : sc.annotations)
            ann[k] = v;
        root["annotations"] = std::move(ann);
    }
    root["jobs"] = json::array();
    for (const JobSpec& job : sc.jobs) {
        json jj;
        jj["task"] = job.task_id;
        jj["release"] = job.release.v;
        json segs = json::array();
        for (const Segment& s : job.segments)
            segs.push_back(json::array(
                {s.kind == SegmentKind::Exec ? "exec" : "susp", s.length.v}));
        jj["segments"] = std::move(segs);
        root["jobs"].push_back(std::move(jj));
    }
    return root.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("scenario is not valid JSON: ") + e.what());
    }
    if (!root.is_object() || !root.contains("horizon") || !root.contains("jobs"))
        throw InputError("scenario must be an object with 'horizon' and 'jobs'");
    for (auto& [key, _] : root.items())
        if (key != "horizon" && key != "jobs" && key != "scale" && key != "annotations" &&
            key != "notes")
            throw InputError("scenario: unknown top-level field '" + key + "'");

    Scenario sc;
    if (!root["horizon"].is_number_unsigned())
        throw InputError("scenario: 'horizon' must be a non-negative integer");
    sc.horizon = TimeTicks(root["horizon"].get<std::uint64_t>());
    if (root.contains("scale")) {
        if (!root["scale"].is_number_unsigned() || root["scale"].get<std::uint64_t>() == 0)
            throw InputError("scenario: 'scale' must be a positive integer");
        sc.scale = root["scale"].get<std::uint64_t>();
    }
    if (root.contains("annotations")) {
        if (!root["annotations"].is_object())
            throw InputError("scenario: 'annotations' must be an object");
        for (auto& [k, v] : root["annotations"].items()) {
            if (!v.is_number_unsigned())
                throw InputError("scenario: annotation '" + k + "' must be an integer");
            sc.annotations[k] = v.get<std::uint64_t>();
        }
    }
    if (!root["jobs"].is_array())
        throw InputError("scenario: 'jobs' must be an array");
    for (const json& jj : root["jobs"]) {
        if (!jj.is_object() || !jj.contains("task") || !jj.contains("release") ||
            !jj.contains("segments"))
            throw InputError("scenario job entries need 'task', 'release' and 'segments'");
        for (auto& [key, _] : jj.items())
            if (key != "task" && key != "release" && key != "segments")
                throw InputError("scenario job: unknown field '" + key + "'");
        JobSpec job;
        job.task_id = jj["task"].get<std::string>();
        if (!jj["release"].is_number_unsigned())
            throw InputError("scenario: release of task '" + job.task_id +
                             "' must be a non-negative integer");
        job.release = TimeTicks(jj["release"].get<std::uint64_t>());
        for (const json& seg : jj["segments"]) {
            if (!seg.is_array() || seg.size() != 2 || !seg[0].is_string() ||
                !seg[1].is_number_unsigned())
                throw InputError("scenario: segments must be [\"exec\"|\"susp\", ticks] pairs");
            const std::string kind = seg[0].get<std::string>();
            if (kind != "exec" && kind != "susp")
                throw InputError("scenario: unknown segment kind '" + kind + "'");
            job.segments.push_back({kind == "exec" ? SegmentKind::Exec : SegmentKind::Susp,
                                    TimeTicks(seg[1].get<std::uint64_t>())});
        }
        job.segments = normalize_segments(std::move(job.segments));
        sc.jobs.push_back(std::move(job));
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return scenario_from_json(buf.str());
    } catch (const Error& e) {
        throw InputError("file '" + path + "': " + e.what());
    }
}

std::string trace_to_jsonl(const Trace& tr) {
    std::ostringstream out;
    for (const TraceEvent& e : tr.events) {
        json je;
        je["t"] = e.t.v;
        je["kind"] = event_name(e.kind);
        if (!e.task_id.empty()) {
            je["task"] = e.task_id;
            je["job"] = e.job_index;
        }
        out << je.dump() << "\n";
    }
    json summary;
    summary["horizon"] = tr.horizon.v;
    summary["jobs"] = json::array();
    for (const JobSummary& s : tr.jobs) {
        json js;
        js["task"] = s.task_id;
        js["job"] = s.job_index;
        js["release"] = s.release.v;
        js["deadline"] = s.deadline.v;
        if (s.completion)
            js["completion"] = s.completion->v;
        js["missed"] = s.missed;
        js["incomplete"] = s.incomplete;
        js["executed"] = s.executed.v;
        js["suspended"] = s.suspended.v;
        summary["jobs"].push_back(std::move(js));
    }
    json last;
    last["summary"] = std::move(summary);
    out << last.dump() << "\n";
    return out.str();
}

Trace trace_from_jsonl(const std::string& text) {
    Trace tr;
    std::istringstream in(text);
    std::string line;
    bool summary_seen = false;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw InputError(std::string("trace line is not valid JSON: ") + e.what());
        }
        if (summary_seen)
            throw InputError("trace has lines after the summary block");
        if (j.contains("summary")) {
            summary_seen = true;
            const json& s = j["summary"];
            tr.horizon = TimeTicks(s.at("horizon").get<std::uint64_t>());
            for (const json& jj : s.at("jobs")) {
                JobSummary sum;
                sum.task_id = jj.at("task").get<std::string>();
                sum.job_index = jj.at("job").get<std::size_t>();
                sum.release = TimeTicks(jj.at("release").get<std::uint64_t>());
                sum.deadline = TimeTicks(jj.at("deadline").get<std::uint64_t>());
                if (jj.contains("completion"))
                    sum.completion = TimeTicks(jj["completion"].get<std::uint64_t>());
                sum.missed = jj.at("missed").get<bool>();
                sum.incomplete = jj.at("incomplete").get<bool>();
                sum.executed = TimeTicks(jj.at("executed").get<std::uint64_t>());
                sum.suspended = TimeTicks(jj.at("suspended").get<std::uint64_t>());
                tr.jobs.push_back(std::move(sum));
            }
            continue;
        }
        TraceEvent e;
        e.t = TimeTicks(j.at("t").get<std::uint64_t>());
        e.kind = event_from_name(j.at("kind").get<std::string>());
        if (j.contains("task")) {
            e.task_id = j["task"].get<std::string>();
            e.job_index = j.at("job").get<std::size_t>();
        }
        tr.events.push_back(std::move(e));
    }
    if (!summary_seen)
        throw InputError("trace is missing its summary block");

    // rebuild execution intervals from the event stream
    std::optional<std::pair<std::string, std::size_t>> run;
    std::uint64_t run_since = 0;
    for (const TraceEvent& e : tr.events) {
        switch (e.kind) {
        case EventKind::StartExec:
        case EventKind::ResumeExec:
            run = {e.task_id, e.job_index};
            run_since = e.t.v;
            break;
        case EventKind::Preempt:
        case EventKind::SuspendBegin:
        case EventKind::Complete:
            if (run && run->first == e.task_id && run->second == e.job_index) {
                if (e.t.v > run_since)
                    tr.exec.push_back(
                        {TimeTicks(run_since), e.t, e.task_id, e.job_index});
                run.reset();
            }
            break;
        default:
            break;
        }
    }
    if (run && tr.horizon.v > run_since)
        tr.exec.push_back({TimeTicks(run_since), tr.horizon, run->first, run->second});
    return tr;
}

std::string violations_to_json(const std::vector<Violation>& vs) {
    json arr = json::array();
    for (const Violation& v : vs) {
        json jv;
        jv["kind"] = v.kind;
        jv["time"] = v.time.v;
        jv["task"] = v.task_id;
        jv["job"] = v.job_index;
        if (!v.detail.empty())
            jv["detail"] = v.detail;
        arr.push_back(std::move(jv));
    }
    return arr.dump(2) + "\n";
}

} // namespace rtsusp
