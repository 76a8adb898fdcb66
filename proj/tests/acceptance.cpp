// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "colorcache/colored_cache.hpp"
#include "colorcache/config.hpp"
#include "colorcache/controller.hpp"
#include "colorcache/decay.hpp"
#include "colorcache/energy.hpp"
#include "colorcache/oracle.hpp"
#include "colorcache/profiler.hpp"
#include "colorcache/runner.hpp"
#include "colorcache/timing.hpp"
#include "colorcache/workload.hpp"

using namespace colorcache;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

bool near(double got, double want, double rel) { return std::fabs(got - want) <= rel * std::fabs(want); }

template <typename T> std::string join(const std::vector<T> &v) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < v.size(); ++i)
        os << (i ? "," : "") << v[i];
    os << '}';
    return os.str();
}

// Every report produced by the suite, for the timing check.
std::vector<std::pair<TimingParams, RunReport>> g_reports;

RunReport run_logged(const RunConfig &cfg, Policy policy) {
    RunReport r = run(cfg, policy);
    g_reports.emplace_back(cfg.timing, r);
    return r;
}

RunConfig single_task(SyntheticKind kind, std::uint64_t working_set, double locality, std::uint64_t budget) {
    RunConfig cfg;
    cfg.controller.interval_length = 1'000'000;
    cfg.workload.scale = 1.0;
    cfg.workload.pattern = "sequential";
    TaskConfig t;
    t.name = std::string(to_string(kind));
    t.kind = kind;
    t.params.working_set = working_set;
    t.params.locality = locality;
    t.budget = budget;
    cfg.workload.tasks = {t};
    return cfg;
}

Outcome sampled_sets() {
    const ProfilingCache pc(CacheGeometry::default_l2(), 64);
    std::vector<std::uint32_t> sets;
    for (const ProfilingPoint &p : pc.points())
        sets.push_back(p.sampled_sets());
    const std::uint64_t expect = 43ull * 4096 / (16 * 64);
    Outcome o;
    o.pass = sets == std::vector<std::uint32_t>{4, 8, 16, 32, 48, 64} && pc.total_sampled_sets() == 172 &&
             expect == 172;
    o.detail = fmt("sampled sets %s, total %llu (43P/16R = %llu)", join(sets).c_str(),
                   static_cast<unsigned long long>(pc.total_sampled_sets()),
                   static_cast<unsigned long long>(expect));
    return o;
}

Outcome overhead() {
    const double f = storage_overhead(40, 64, 64);
    return {std::fabs(f - 0.003) <= 5e-4, fmt("storage overhead %.6f (target 0.003 +/- 5e-4)", f)};
}

Outcome config_space() {
    ControllerConfig cfg;
    const auto a = build_config_space(40, 150, 64, cfg);
    const auto b = build_config_space(40, 250, 64, cfg);
    const std::vector<std::uint32_t> want_a = {28, 30, 32, 34, 36, 38, 40, 42, 44, 46, 48};
    const std::vector<std::uint32_t> want_b = {32, 34, 36, 38, 40, 42, 44, 46, 48, 50, 52};
    return {a == want_a && b == want_b, fmt("G=150 -> %s, G=250 -> %s", join(a).c_str(), join(b).c_str())};
}

Outcome energy_checks() {
    const EnergyParams p;
    RunReport r;
    r.clock_hz = 1.5e9;
    IntervalRecord second;
    second.stats.base_cycles = 1'500'000'000;
    r.intervals = {second};

    const double l2 = e_l2(p, 0, 0, 1.0, 64, 64, false);
    const double l2_pen = e_l2(p, 0, 0, 1.0, 64, 64, true);
    const double mem = e_mem(p, 0, 1.0);
    const double algo = e_algo(p, 0, 0.0, 1000, false);

    const EnergyBreakdown plain = oracle::exact_energy(r);
    r.area_penalty = true;
    const double oracle_pen = oracle::exact_energy(r).e_l2;
    RunReport tran;
    tran.intervals.resize(1);
    tran.intervals[0].stats.transitions = 1000;
    const double oracle_algo = oracle::exact_energy(tran).e_algo;

    Outcome o;
    o.pass = near(l2, 2.016, 1e-12) && near(l2_pen, 2.1168, 1e-12) && near(mem, 0.18, 1e-12) &&
             near(algo, 2e-9, 1e-12) && same_bits(l2, plain.e_l2) && same_bits(l2_pen, oracle_pen) &&
             same_bits(mem, plain.e_mem) && same_bits(algo, oracle_algo);
    o.detail = fmt("e_l2 %.6g J, with penalty %.6g J, e_mem %.6g J, e_algo(Q=1000) %.6g J; oracle bit-equal: %s",
                   l2, l2_pen, mem, algo,
                   same_bits(l2, plain.e_l2) && same_bits(l2_pen, oracle_pen) && same_bits(mem, plain.e_mem) &&
                           same_bits(algo, oracle_algo)
                       ? "yes"
                       : "no");
    return o;
}

Outcome profiler_exact() {
    const CacheGeometry g = CacheGeometry::default_l2();
    const SyntheticKind kinds[] = {SyntheticKind::Sequential, SyntheticKind::Loop, SyntheticKind::Mixed};
    std::size_t runs = 0, mismatches = 0;
    std::string first_bad;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        for (SyntheticKind kind : kinds) {
            SyntheticParams sp;
            sp.length = 100'000;
            // Working sets from 256 KB to 4 MB so every profiling point sees misses.
            sp.working_set = (256ull * 1024) << (seed % 5);
            sp.locality = 0.9;
            sp.phase_length = 20'000;
            const auto trace = gen_synthetic(kind, sp, seed);
            ProfilingCache pc(g, 1);
            for (const TraceRecord &r : trace)
                pc.access(r.address, r.kind);
            ++runs;
            for (const ProfilingPoint &pt : pc.points()) {
                const oracle::MissCounts m = oracle::exact_misses(trace, g, pt.colors());
                if (pc.estimated_load_misses(pt.colors()) != static_cast<double>(m.load_misses) ||
                    pc.estimated_total_misses(pt.colors()) != static_cast<double>(m.total_misses)) {
                    if (mismatches++ == 0)
                        first_bad = fmt(" (first: %s seed %llu at %u colors)", std::string(to_string(kind)).c_str(),
                                        static_cast<unsigned long long>(seed), pt.colors());
                }
            }
        }
    }
    return {mismatches == 0, fmt("R=1, %zu traces x 6 points, %zu mismatches%s", runs, mismatches, first_bad.c_str())};
}

Outcome sampling_accuracy() {
    const CacheGeometry g = CacheGeometry::default_l2();
    int good_seeds = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SyntheticParams sp;
        sp.length = 1'000'000;
        sp.working_set = 4ull << 20;
        const auto trace = gen_synthetic(SyntheticKind::Random, sp, seed);
        ProfilingCache pc(g, 64);
        for (const TraceRecord &r : trace)
            pc.access(r.address, r.kind);
        bool ok = true;
        for (const ProfilingPoint &pt : pc.points()) {
            const oracle::MissCounts m = oracle::exact_misses(trace, g, pt.colors());
            const std::pair<double, std::uint64_t> pairs[] = {
                {pc.estimated_load_misses(pt.colors()), m.load_misses},
                {pc.estimated_total_misses(pt.colors()), m.total_misses}};
            for (const auto &[est, exact] : pairs) {
                if (exact < 1000)
                    continue;
                const double err = std::fabs(est - static_cast<double>(exact)) / static_cast<double>(exact);
                worst = std::max(worst, err);
                ok = ok && err <= 0.15;
            }
        }
        good_seeds += ok;
    }
    return {good_seeds >= 18, fmt("R=64, 1M uniform accesses: %d/20 seeds within 15%% (worst error %.2f%%)",
                                  good_seeds, worst * 100.0)};
}

Outcome ppm_consistency() {
    std::size_t intervals = 0, bad = 0;
    for (const auto &[params, report] : g_reports) {
        const TimingModel tm(params);
        for (const IntervalRecord &rec : report.intervals) {
            ++intervals;
            const double est = tm.estimate_cycles(rec.stats, static_cast<double>(rec.stats.load_misses));
            if (est != static_cast<double>(rec.stats.base_cycles + rec.stats.stall_cycles))
                ++bad;
        }
    }
    return {bad == 0 && intervals > 0,
            fmt("%zu intervals from %zu runs, %zu inconsistent", intervals, g_reports.size(), bad)};
}

Outcome dct_semantics(const RunConfig &demo) {
    Outcome o;
    // Access level: identical hit/miss sequence with an infinite decay interval.
    const CacheGeometry g = CacheGeometry::default_l2();
    SyntheticParams sp;
    sp.length = 300'000;
    sp.working_set = 3ull << 20;
    sp.phase_length = 30'000;
    const auto trace = gen_synthetic(SyntheticKind::Mixed, sp, 4);
    ColoredCache base(g);
    DecayConfig inf_cfg;
    inf_cfg.decay_interval = INFINITY;
    DecayCache never(g, inf_cfg);
    std::uint64_t now = 0, diverged = 0;
    for (const TraceRecord &r : trace) {
        now += r.instr_delta + 18;
        never.sweep_until(now);
        const AccessOutcome a = base.access(r.address, r.kind);
        const AccessOutcome b = never.access(r.address, r.kind, now);
        diverged += a.hit != b.hit || a.writeback != b.writeback;
    }

    // Run level: same counters and dynamic energy, leakage x 1.05.
    RunConfig cfg = demo;
    cfg.dct.decay_interval = INFINITY;
    const RunReport rb = run_logged(cfg, Policy::Baseline);
    const RunReport rd = run_logged(cfg, Policy::Dct);
    bool run_equal = rb.intervals.size() == rd.intervals.size();
    double worst_leak = 0.0;
    const EnergyParams &p = cfg.energy;
    for (std::size_t i = 0; run_equal && i < rb.intervals.size(); ++i) {
        const IntervalRecord &x = rb.intervals[i];
        const IntervalRecord &y = rd.intervals[i];
        run_equal = x.stats.l2_hits == y.stats.l2_hits && x.stats.l2_misses == y.stats.l2_misses &&
                    x.stats.writebacks == y.stats.writebacks && x.stats.total_cycles() == y.stats.total_cycles() &&
                    x.stats.transitions == 0 && y.stats.transitions == 0 && same_bits(x.energy.e_mem, y.energy.e_mem) &&
                    same_bits(x.energy.e_algo, y.energy.e_algo);
        const double dyn = p.e_dyn_l2 * (static_cast<double>(x.stats.l2_hits) + 2.0 * static_cast<double>(x.stats.l2_misses));
        const double leak_b = x.energy.e_l2 - dyn;
        const double leak_d = y.energy.e_l2 - dyn;
        if (leak_b > 0.0)
            worst_leak = std::max(worst_leak, std::fabs(leak_d / leak_b - 1.0 - p.area_leak_penalty));
    }
    run_equal = run_equal && worst_leak < 1e-9;

    // Finite interval: after every sweep no valid line has been idle for DI or more.
    DecayConfig fin;
    fin.decay_interval = 20'000;
    DecayCache dc(g, fin);
    SyntheticParams rp;
    rp.length = 400'000;
    rp.working_set = 1ull << 20;
    const auto rnd = gen_synthetic(SyntheticKind::Random, rp, 8);
    const auto period = static_cast<std::uint64_t>(dc.config().resolved_sweep());
    const auto di = static_cast<std::uint64_t>(fin.decay_interval);
    now = 0;
    std::uint64_t checked_sweeps = 0, stale = 0, decayed = 0, last_checked = 0;
    for (const TraceRecord &r : rnd) {
        // Idle bursts let whole sets go stale.
        now += r.instr_delta + 18 + ((checked_sweeps % 7 == 3) ? 5'000 : 0);
        decayed += dc.sweep_until(now).decayed;
        const std::uint64_t sweep_at = now / period * period;
        if (sweep_at != last_checked) {
            last_checked = sweep_at;
            ++checked_sweeps;
            for (std::uint32_t s = 0; s < g.sets(); ++s)
                for (std::uint32_t w = 0; w < g.ways(); ++w) {
                    const CacheLine &l = dc.cache().line(s, w);
                    if (l.valid && dc.last_access(s, w) <= sweep_at && sweep_at - dc.last_access(s, w) >= di)
                        ++stale;
                }
        }
        dc.access(r.address, r.kind, now);
    }

    o.pass = diverged == 0 && run_equal && stale == 0 && decayed > 0;
    o.detail = fmt("DI=inf: %llu divergent accesses, run counters %s, leakage ratio off by %.1e; "
                   "DI=20000: %llu sweeps checked, %llu decays, %llu stale valid lines",
                   static_cast<unsigned long long>(diverged), run_equal ? "equal" : "differ", worst_leak,
                   static_cast<unsigned long long>(checked_sweeps), static_cast<unsigned long long>(decayed),
                   static_cast<unsigned long long>(stale));
    return o;
}

Outcome behavior() {
    // No-reuse stream.
    const RunConfig stream = single_task(SyntheticKind::Sequential, 1ull << 36, 1.0, 20'000'000);
    const RunReport sb = run_logged(stream, Policy::Baseline);
    const RunReport so = run_logged(stream, Policy::Ours);
    const std::uint32_t n = stream.geometry.colors();
    bool converged = so.final_colors <= n / 8;
    const std::size_t half = so.intervals.size() / 2;
    for (std::size_t i = half; i < so.intervals.size(); ++i)
        converged = converged && so.intervals[i].active_colors <= n / 8;
    const bool cheaper = so.totals.energy.total < sb.totals.energy.total;

    // Loops that fit in half the colors, with 10% of accesses streaming past.
    std::string loops;
    bool loops_ok = true;
    for (std::uint64_t ws : {768ull << 10, 1ull << 20}) {
        const RunConfig loop = single_task(SyntheticKind::Loop, ws, 0.9, 60'000'000);
        const RunReport lb = run_logged(loop, Policy::Baseline);
        const RunReport lo = run_logged(loop, Policy::Ours);
        const double ratio = static_cast<double>(lo.totals.l2_misses) / static_cast<double>(lb.totals.l2_misses);
        loops_ok = loops_ok && ratio <= 1.10;
        loops += fmt("; loop %lluKB: C*=%u, misses x%.3f", static_cast<unsigned long long>(ws >> 10),
                     lo.final_colors, ratio);
    }
    return {converged && cheaper && loops_ok,
            fmt("stream: C*=%u (limit %u), energy %.4g J vs baseline %.4g J%s", so.final_colors, n / 8,
                so.totals.energy.total, sb.totals.energy.total, loops.c_str())};
}

Outcome demo_run(const RunConfig &demo) {
    const RunReport b = run_logged(demo, Policy::Baseline);
    const RunReport d = run_logged(demo, Policy::Dct);
    const RunReport o = run_logged(demo, Policy::Ours);
    const ComparisonReport od = compare(b, o);
    const ComparisonReport dd = compare(b, d);
    bool verified = true;
    for (const RunReport *r : {&b, &d, &o})
        verified = verified && !oracle::verify_energy(*r);
    return {od.energy_saving_pct > 0.0 && verified && o.task_switches == 4,
            fmt("%zu switches; energy saving vs baseline: ours %.2f%%, dct %.2f%%; EDP: ours %.2f%%, dct %.2f%%; "
                "cycles: ours %+.2f%%, dct %+.2f%%; oracle verified: %s",
                o.task_switches, od.energy_saving_pct, dd.energy_saving_pct, od.edp_saving_pct, dd.edp_saving_pct,
                od.cycle_increase_pct, dd.cycle_increase_pct, verified ? "yes" : "no")};
}

} // namespace

int main() {
    const RunConfig demo = load_config(std::string(COLORCACHE_SOURCE_DIR) + "/configs/default.ini");

    struct Criterion {
        int id;
        const char *name;
        std::function<Outcome()> check;
    };
    // The timing check runs last so it sees every report the others produced.
    const std::vector<Criterion> criteria = {
        {1, "profiler sampled sets", sampled_sets},
        {2, "profiler storage overhead", overhead},
        {3, "candidate size lists", config_space},
        {4, "energy hand checks", energy_checks},
        {5, "profiler exactness at R=1", profiler_exact},
        {6, "sampling accuracy at R=64", sampling_accuracy},
        {8, "decay semantics", [&] { return dct_semantics(demo); }},
        {9, "behavioral trend", behavior},
        {10, "three-task demonstration", [&] { return demo_run(demo); }},
        {7, "penalty-per-miss self-consistency", ppm_consistency},
    };

    std::vector<std::pair<int, std::string>> lines;
    bool all = true;
    for (const Criterion &c : criteria) {
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        lines.emplace_back(c.id, fmt("%s criterion %2d  %-34s %s", o.pass ? "PASS" : "FAIL", c.id, c.name,
                                     o.detail.c_str()));
    }
    std::sort(lines.begin(), lines.end());
    for (const auto &[id, line] : lines)
        std::puts(line.c_str());
    std::printf("%s\n", all ? "all criteria passed" : "some criteria FAILED");
    return all ? 0 : 1;
}
