#include "rtsusp/scenario_gen.hpp"

#include <algorithm>
#include <cmath>

namespace rtsusp {

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0)
        throw RangeError("empty draw range");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = next();
    } while (x >= limit);
    return x % n;
}

std::uint64_t Rng::between(std::uint64_t lo, std::uint64_t hi) {
    if (lo > hi)
        throw RangeError("empty draw range");
    std::uint64_t span = hi - lo;
    if (span == UINT64_MAX)
        return next();
    return lo + below(span + 1);
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

const char* suspension_style_name(SuspensionStyle s) {
    switch (s) {
    case SuspensionStyle::None: return "none";
    case SuspensionStyle::RandomSplit: return "random-split";
    case SuspensionStyle::DeferredMax: return "deferred-max";
    }
    throw RangeError("unknown suspension style");
}

SuspensionStyle suspension_style_from_name(const std::string& name) {
    if (name == "none")
        return SuspensionStyle::None;
    if (name == "random-split")
        return SuspensionStyle::RandomSplit;
    if (name == "deferred-max")
        return SuspensionStyle::DeferredMax;
    throw InputError("unknown suspension style '" + name +
                     "' (expected none, random-split or deferred-max)");
}

namespace {

std::vector<Segment> plain_segments(const Task& t) {
    return {{SegmentKind::Exec, t.wcet}};
}

// 1 tick up front, the whole suspension, then the remainder; the latest
// legal computation under the exec-first grammar
std::vector<Segment> deferred_segments(const Task& t) {
    if (t.wcet.v < 2 || t.max_suspension.v == 0)
        return plain_segments(t);
    return {{SegmentKind::Exec, TimeTicks(1)},
            {SegmentKind::Susp, t.max_suspension},
            {SegmentKind::Exec, TimeTicks(t.wcet.v - 1)}};
}

// k non-negative parts summing to n, via sorted uniform cut points
std::vector<std::uint64_t> random_composition(std::uint64_t n, std::size_t k, Rng& rng) {
    std::vector<std::uint64_t> cuts;
    for (std::size_t i = 0; i + 1 < k; ++i)
        cuts.push_back(rng.between(0, n));
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::uint64_t> parts;
    std::uint64_t prev = 0;
    for (std::uint64_t c : cuts) {
        parts.push_back(c - prev);
        prev = c;
    }
    parts.push_back(n - prev);
    return parts;
}

std::vector<Segment> random_segments(const Task& t, std::size_t max_phases, Rng& rng) {
    std::size_t phases = 1 + static_cast<std::size_t>(rng.below(max_phases));
    if (t.wcet.v < 2 || t.max_suspension.v == 0)
        phases = 0;
    if (phases == 0)
        return plain_segments(t);
    std::uint64_t total_susp = rng.between(0, t.max_suspension.v);
    // first and last exec chunks stay >= 1 so the grammar holds after
    // zero-length segments are normalized away
    std::vector<std::uint64_t> execs = random_composition(t.wcet.v - 2, phases + 1, rng);
    execs.front() += 1;
    execs.back() += 1;
    std::vector<std::uint64_t> susps = random_composition(total_susp, phases, rng);
    std::vector<Segment> raw;
    for (std::size_t i = 0; i < execs.size(); ++i) {
        raw.push_back({SegmentKind::Exec, TimeTicks(execs[i])});
        if (i < susps.size())
            raw.push_back({SegmentKind::Susp, TimeTicks(susps[i])});
    }
    return normalize_segments(std::move(raw));
}

std::vector<Segment> styled_segments(const Task& t, const GenConfig& cfg, Rng& rng) {
    switch (cfg.suspension_style) {
    case SuspensionStyle::None: return plain_segments(t);
    case SuspensionStyle::DeferredMax: return deferred_segments(t);
    case SuspensionStyle::RandomSplit: return random_segments(t, cfg.max_suspension_phases, rng);
    }
    throw RangeError("unknown suspension style");
}

} // namespace

Scenario synchronous_periodic_scenario(const TaskSet& ts, TimeTicks horizon,
                                       const GenConfig& cfg) {
    if (horizon.v == 0)
        throw RangeError("horizon must be at least 1");
    if (cfg.max_suspension_phases == 0)
        throw RangeError("max_suspension_phases must be at least 1");
    Rng rng(cfg.seed);
    Scenario sc;
    sc.horizon = horizon;
    for (unsigned k = 1; k <= ts.size(); ++k) {
        const Task& t = ts.by_rank(k);
        std::uint64_t r = 0;
        std::size_t count = 0;
        while (r < horizon.v) {
            if (cfg.max_jobs_per_task != 0 && count == cfg.max_jobs_per_task)
                break;
            sc.jobs.push_back({t.id, TimeTicks(r), styled_segments(t, cfg, rng)});
            count++;
            if (t.period.v >= horizon.v - r)
                break;
            r += t.period.v;
        }
    }
    validate_scenario(ts, sc);
    return sc;
}

Scenario deferred_adversarial_scenario(const TaskSet& ts, unsigned victim_rank,
                                       TimeTicks horizon) {
    const Task& victim = ts.by_rank(victim_rank);
    std::uint64_t burst_start = 0;
    for (unsigned i = 1; i < victim_rank; ++i) {
        const Task& hp = ts.by_rank(i);
        if (hp.wcet.v >= 2 && hp.max_suspension.v >= 1)
            burst_start = std::max(burst_start, hp.max_suspension.v);
    }
    if (burst_start >= horizon.v)
        throw RangeError("horizon " + std::to_string(horizon.v) +
                         " is too short for the deferred burst at " +
                         std::to_string(burst_start));
    TimeTicks victim_deadline = TimeTicks(burst_start) + victim.deadline;

    Scenario sc;
    sc.horizon = horizon;
    for (unsigned i = 1; i < victim_rank; ++i) {
        const Task& hp = ts.by_rank(i);
        std::uint64_t r = 0;
        bool first = true;
        // releases beyond the victim's deadline cannot affect the witness
        while (r < horizon.v && r <= victim_deadline.v) {
            sc.jobs.push_back(
                {hp.id, TimeTicks(r), first ? deferred_segments(hp) : plain_segments(hp)});
            first = false;
            if (hp.period.v >= horizon.v - r)
                break;
            r += hp.period.v;
        }
    }
    sc.jobs.push_back({victim.id, TimeTicks(burst_start), deferred_segments(victim)});
    validate_scenario(ts, sc);
    return sc;
}

Scenario random_scenario(const TaskSet& ts, TimeTicks horizon, const GenConfig& cfg) {
    if (horizon.v == 0)
        throw RangeError("horizon must be at least 1");
    if (cfg.max_suspension_phases == 0)
        throw RangeError("max_suspension_phases must be at least 1");
    Rng rng(cfg.seed);
    Scenario sc;
    sc.horizon = horizon;
    for (unsigned k = 1; k <= ts.size(); ++k) {
        const Task& t = ts.by_rank(k);
        std::uint64_t r = rng.below(std::min(t.period.v, horizon.v));
        std::size_t count = 0;
        while (r < horizon.v) {
            if (cfg.max_jobs_per_task != 0 && count == cfg.max_jobs_per_task)
                break;
            sc.jobs.push_back({t.id, TimeTicks(r), random_segments(t, cfg.max_suspension_phases, rng)});
            count++;
            // geometric-tail jitter on top of the minimum separation
            std::uint64_t gap = t.period.v;
            while (gap < horizon.v - r && rng.below(2) == 1)
                gap = (TimeTicks(gap) + TimeTicks(1 + rng.below(t.period.v))).v;
            if (gap >= horizon.v - r)
                break;
            r += gap;
        }
    }
    validate_scenario(ts, sc);
    return sc;
}

std::pair<TaskSet, Scenario> figure1_fixture() {
    std::vector<Task> tasks = {
        {"t1", TimeTicks(10), TimeTicks(10), TimeTicks(60), TimeTicks(60), 1},
        {"t2", TimeTicks(10), TimeTicks(60), TimeTicks(100), TimeTicks(100), 2},
        {"t3", TimeTicks(40), TimeTicks(10), TimeTicks(180), TimeTicks(180), 3},
        {"t4", TimeTicks(50), TimeTicks(0), TimeTicks(200), TimeTicks(200), 4},
    };
    TaskSet ts = validate_taskset(tasks);

    auto e = [](std::uint64_t n) { return Segment{SegmentKind::Exec, TimeTicks(n)}; };
    auto s = [](std::uint64_t n) { return Segment{SegmentKind::Susp, TimeTicks(n)}; };
    Scenario sc;
    sc.scale = 10;
    sc.horizon = TimeTicks(240);
    sc.jobs = {
        {"t1", TimeTicks(41), {e(1), s(9), e(9)}},
        {"t1", TimeTicks(101), {e(10)}},
        {"t1", TimeTicks(161), {e(10)}},
        {"t1", TimeTicks(221), {e(10)}},
        {"t2", TimeTicks(0), {e(1), s(50), e(1), s(9), e(8)}},
        {"t2", TimeTicks(100), {e(10)}},
        {"t2", TimeTicks(200), {e(10)}},
        {"t3", TimeTicks(60), {e(1), s(8), e(39)}},
        {"t4", TimeTicks(70), {e(50)}},
    };
    sc.annotations = {{"t1", 41}, {"t2", 60}, {"t3", 60}, {"t4", 70}, {"f4", 199}};
    validate_scenario(ts, sc);
    return {std::move(ts), std::move(sc)};
}

std::vector<TaskSet> generate_tasksets(const TasksetGenConfig& cfg) {
    if (cfg.n_tasks == 0)
        throw ValidationError("n_tasks must be at least 1");
    if (!(Rational(0) < cfg.target_utilization) || Rational(1) < cfg.target_utilization)
        throw ValidationError("target utilization must be in (0, 1]");
    if (cfg.suspension_ratio < 0.0 || cfg.suspension_ratio > 1.0)
        throw ValidationError("suspension ratio must be in [0, 1]");
    if (cfg.min_period == 0 || cfg.max_period < cfg.min_period)
        throw ValidationError("period range is empty");
    if (cfg.max_period > 1000000000000ULL)
        throw ValidationError("max_period too large for exact utilization arithmetic");

    const double target = cfg.target_utilization.to_double();
    const double log_lo = std::log(static_cast<double>(cfg.min_period));
    const double log_hi = std::log(static_cast<double>(cfg.max_period));

    std::vector<TaskSet> out;
    for (std::size_t set = 0; set < cfg.n_sets; ++set) {
        bool done = false;
        for (std::size_t attempt = 0; attempt < cfg.max_retries && !done; ++attempt) {
            Rng rng(mix_seed(mix_seed(cfg.seed, set), attempt));

            // UUniFast recursion over the target utilization
            std::vector<double> utils(cfg.n_tasks);
            double sum = target;
            for (std::size_t i = 0; i + 1 < cfg.n_tasks; ++i) {
                double rest = sum * std::pow(rng.uniform01(),
                                             1.0 / static_cast<double>(cfg.n_tasks - 1 - i));
                utils[i] = sum - rest;
                sum = rest;
            }
            utils.back() = sum;

            std::vector<Task> tasks(cfg.n_tasks);
            for (std::size_t i = 0; i < cfg.n_tasks; ++i) {
                double logT = log_lo + rng.uniform01() * (log_hi - log_lo);
                std::uint64_t T = static_cast<std::uint64_t>(std::llround(std::exp(logT)));
                T = std::clamp(T, cfg.min_period, cfg.max_period);
                std::uint64_t C = static_cast<std::uint64_t>(
                    std::llround(utils[i] * static_cast<double>(T)));
                C = std::clamp<std::uint64_t>(C, 1, T);
                std::uint64_t S = static_cast<std::uint64_t>(std::llround(
                    cfg.suspension_ratio * static_cast<double>(T - C) * rng.uniform01()));
                tasks[i] = {"", TimeTicks(C), TimeTicks(S), TimeTicks(T), TimeTicks(T), 0};
            }
            std::stable_sort(tasks.begin(), tasks.end(),
                             [](const Task& a, const Task& b) { return a.period < b.period; });
            Rational total(0);
            for (std::size_t i = 0; i < cfg.n_tasks; ++i) {
                tasks[i].id = "t" + std::to_string(i + 1);
                tasks[i].priority = static_cast<unsigned>(i + 1);
                total = total + Rational(static_cast<std::int64_t>(tasks[i].wcet.v),
                                         static_cast<std::int64_t>(tasks[i].period.v));
            }
            if (Rational(1) < total)
                continue;
            out.push_back(validate_taskset(tasks));
            done = true;
        }
        if (!done)
            throw ValidationError("could not draw a feasible task set within " +
                                  std::to_string(cfg.max_retries) + " retries (set " +
                                  std::to_string(set) + ")");
    }
    return out;
}

} // namespace rtsusp
