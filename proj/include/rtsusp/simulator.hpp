#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rtsusp/task_model.hpp"

namespace rtsusp {

enum class SegmentKind { Exec, Susp };

struct Segment {
    SegmentKind kind = SegmentKind::Exec;
    TimeTicks length;
};

// one concrete job: segments alternate exec/susp, start and end with exec,
// every segment >= 1 tick, exec total = C, susp total <= S
struct JobSpec {
    std::string task_id;
    TimeTicks release;
    std::vector<Segment> segments;
};

// concrete run: per-task job lists with sporadic separation, bounded horizon
struct Scenario {
    TimeTicks horizon;
    std::uint64_t scale = 1; // documentation of the tick mapping, not re-applied
    std::vector<JobSpec> jobs;
    std::map<std::string, std::uint64_t> annotations; // free-form landmark metadata
};

// drops zero-length segments, merges adjacent same-kind runs, then checks
// the alternating exec-first exec-last grammar
std::vector<Segment> normalize_segments(std::vector<Segment> raw);

// full structural check of a scenario against its task set
void validate_scenario(const TaskSet& ts, const Scenario& sc);

enum class EventKind {
    Release,
    StartExec,
    Preempt,
    ResumeExec,
    SuspendBegin,
    SuspendEnd,
    Complete,
    DeadlineMiss,
    IdleBegin,
    IdleEnd,
};

const char* event_name(EventKind k);
EventKind event_from_name(const std::string& name);

struct TraceEvent {
    TimeTicks t;
    EventKind kind = EventKind::Release;
    std::string task_id;
    std::size_t job_index = 0;

    bool operator==(const TraceEvent&) const = default;
};

struct JobSummary {
    std::string task_id;
    std::size_t job_index = 0;
    TimeTicks release;
    TimeTicks deadline; // absolute
    std::optional<TimeTicks> completion;
    bool missed = false;     // deadline passed before completion
    bool incomplete = false; // still unfinished when the horizon cut off
    TimeTicks executed;
    TimeTicks suspended;

    bool operator==(const JobSummary&) const = default;
};

struct ExecInterval {
    TimeTicks from;
    TimeTicks to;
    std::string task_id;
    std::size_t job_index = 0;

    bool operator==(const ExecInterval&) const = default;
};

struct Trace {
    TimeTicks horizon;
    std::vector<TraceEvent> events;
    std::vector<JobSummary> jobs;
    std::vector<ExecInterval> exec; // merged, ascending, non-overlapping

    bool operator==(const Trace&) const = default;
};

struct Violation {
    std::string kind;
    TimeTicks time;
    std::string task_id;
    std::size_t job_index = 0;
    std::string detail;
};

// deterministic event-driven preemptive fixed-priority schedule; time jumps
// straight to the next release, running-segment end or suspension expiry.
// ties resolve completions and expiries first, then releases, then the
// scheduling decision; equal-time likes order by task priority, job index
Trace simulate(const TaskSet& ts, const Scenario& sc);

// independent re-check of a trace: deadline misses plus every structural
// invariant (single processor, priority order, work conservation, per-job
// budgets and event grammar); empty result means a clean run
std::vector<Violation> verify_trace(const Trace& tr, const TaskSet& ts);

// idle ticks in [from, to); both bounds must sit inside the trace
TimeTicks idle_time(const Trace& tr, TimeTicks from, TimeTicks to);

std::string scenario_to_json(const Scenario& sc);
Scenario scenario_from_json(const std::string& text);
Scenario load_scenario_file(const std::string& path);

// one event object per line, then one {"summary": ...} line
std::string trace_to_jsonl(const Trace& tr);
Trace trace_from_jsonl(const std::string& text);

std::string violations_to_json(const std::vector<Violation>& vs);

} // namespace rtsusp
