#include "colorcache/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <sstream>

#include "colorcache/colored_cache.hpp"
#include "colorcache/controller.hpp"
#include "colorcache/decay.hpp"
#include "colorcache/error.hpp"
#include "colorcache/profiler.hpp"
#include "colorcache/workload.hpp"

namespace colorcache {

Policy parse_policy(std::string_view name) {
    if (name == "baseline")
        return Policy::Baseline;
    if (name == "dct")
        return Policy::Dct;
    if (name == "ours")
        return Policy::Ours;
    throw ConfigError("policy", "unknown policy '" + std::string(name) + "' (baseline|dct|ours)");
}

std::string_view to_string(Policy policy) {
    switch (policy) {
    case Policy::Baseline:
        return "baseline";
    case Policy::Dct:
        return "dct";
    case Policy::Ours:
        return "ours";
    }
    return "unknown";
}

namespace {

std::unique_ptr<TraceSource> make_source(const RunConfig &cfg, const TaskConfig &task) {
    if (task.trace_path) {
        std::filesystem::path p(*task.trace_path);
        if (p.is_relative())
            p = std::filesystem::path(cfg.base_dir) / p;
        return std::make_unique<TraceFileSource>(p.string());
    }
    SyntheticParams params = task.params;
    if (task.length)
        params.length = *task.length;
    return std::make_unique<SyntheticSource>(task.kind, params, task.seed, !task.length.has_value());
}

class Simulation {
  public:
    Simulation(const RunConfig &cfg, Policy policy)
        : cfg_(cfg), policy_(policy), geom_(cfg.geometry), timing_(cfg.timing),
          interval_length_(cfg.interval_length()) {
        cfg_.validate();
        switch (policy_) {
        case Policy::Baseline:
            cache_.emplace(geom_, 1, geom_.colors());
            break;
        case Policy::Dct:
            decay_.emplace(geom_, cfg_.dct);
            break;
        case Policy::Ours:
            cache_.emplace(geom_, cfg_.controller.resolved_min(geom_.colors()), cfg_.initial_colors);
            profiler_.emplace(geom_, cfg_.controller.sampling_ratio);
            controller_.emplace(geom_, cfg_.controller, cfg_.energy);
            break;
        }
        report_.policy = std::string(to_string(policy_));
        report_.fingerprint = cfg_.fingerprint();
        report_.geometry = geom_;
        report_.energy_params = cfg_.energy;
        report_.clock_hz = cfg_.timing.clock_hz;
        report_.area_penalty = policy_ != Policy::Baseline;
        report_.profiling = policy_ == Policy::Ours;
        report_.interval_length = interval_length_;
    }

    RunReport run() {
        std::vector<std::unique_ptr<TraceSource>> sources;
        for (const TaskConfig &t : cfg_.workload.tasks)
            sources.push_back(make_source(cfg_, t));
        const std::size_t ntasks = sources.size();
        Schedule schedule = cfg_.make_schedule();
        std::vector<std::uint64_t> executed(ntasks, 0);
        std::vector<bool> finished(ntasks, false);
        std::vector<std::optional<TraceRecord>> pending(ntasks);

        while (true) {
            const Schedule::Step step = schedule.step(executed, finished);
            if (step.done)
                break;
            if (step.switched)
                task_switch();
            task_ = static_cast<std::uint32_t>(step.task);
            const std::size_t t = step.task;
            while (executed[t] < step.limit) {
                if (!pending[t]) {
                    pending[t] = sources[t]->next();
                    if (!pending[t]) {
                        finished[t] = true;
                        break;
                    }
                }
                TraceRecord &rec = *pending[t];
                const std::uint64_t room =
                    std::min(step.limit - executed[t], interval_length_ - stats_.instructions);
                if (rec.instr_delta > room) {
                    // The record straddles a boundary: retire what fits, keep the rest pending.
                    timing_.add_instructions(stats_, room);
                    executed[t] += room;
                    rec.instr_delta -= static_cast<std::uint32_t>(room);
                } else {
                    timing_.add_instructions(stats_, rec.instr_delta);
                    executed[t] += rec.instr_delta;
                    const TraceRecord r = rec;
                    pending[t].reset();
                    access(tag_address(task_, r.address), r.kind);
                }
                if (stats_.instructions >= interval_length_)
                    close_interval("interval");
            }
        }
        close_interval("end");

        report_.task_instructions = executed;
        report_.task_switches = schedule.switches();
        report_.final_colors = cache_ ? cache_->active_colors() : geom_.colors();
        finish_totals();
        return std::move(report_);
    }

  private:
    std::uint64_t now() const { return elapsed_cycles_ + stats_.total_cycles(); }

    void access(Addr addr, AccessKind kind) {
        AccessOutcome out;
        if (decay_) {
            const std::uint64_t t = now();
            const DecayCache::SweepResult sw = decay_->sweep_until(t);
            stats_.transitions += sw.decayed;
            stats_.flush_writebacks += sw.writebacks;
            out = decay_->access(addr, kind, t);
        } else {
            out = cache_->access(addr, kind);
            if (profiler_ && profiler_->access(addr, kind).sampled)
                ++stats_.prof_accesses;
        }
        timing_.advance(stats_, 0, kind, out);
    }

    void task_switch() {
        close_interval("switch");
        if (decay_)
            decay_->reset(now());
        if (profiler_)
            profiler_->reset();
    }

    void close_interval(const char *reason) {
        if (stats_.instructions == 0 && stats_.l2_accesses == 0 && stats_.transitions == 0 &&
            stats_.flush_writebacks == 0)
            return;
        IntervalRecord rec;
        rec.index = report_.intervals.size();
        rec.task = task_;
        rec.reason = reason;

        switch (policy_) {
        case Policy::Baseline:
            rec.active_colors = geom_.colors();
            rec.active_ratio = 1.0;
            break;
        case Policy::Ours:
            rec.active_colors = cache_->active_colors();
            rec.active_ratio = cache_->active_ratio();
            break;
        case Policy::Dct: {
            const double integral = decay_->take_powered_integral(now());
            const double cycles = static_cast<double>(stats_.total_cycles());
            const double lines = static_cast<double>(geom_.lines());
            rec.active_colors = geom_.colors();
            rec.active_ratio = cycles > 0.0 ? integral / (lines * cycles)
                                            : static_cast<double>(decay_->cache().powered_lines()) / lines;
            break;
        }
        }

        if (policy_ == Policy::Ours && rec.reason == "interval") {
            const Decision d = controller_->on_interval_end(*cache_, *profiler_, stats_, timing_);
            stats_.transitions += d.reconfig.transitions();
            stats_.flush_writebacks += d.reconfig.writebacks;
            rec.flushed_lines = d.reconfig.flushed_lines;
            DecisionSummary sum;
            sum.marginal_gain = d.marginal_gain;
            sum.chosen = d.chosen;
            for (const Candidate &c : d.candidates)
                sum.candidates.push_back(
                    {c.colors, c.est_load_misses, c.est_total_misses, c.est_cycles, c.energy.total});
            rec.decision = std::move(sum);
        }

        stats_.mem_accesses =
            stats_.l2_misses + stats_.writebacks + (cfg_.charge_flush_writebacks ? stats_.flush_writebacks : 0);
        timing_.commit_interval(stats_);

        rec.stats = stats_;
        rec.time_s = static_cast<double>(stats_.total_cycles()) / cfg_.timing.clock_hz;
        const EnergyParams &ep = cfg_.energy;
        rec.energy = make_breakdown(
            e_l2(ep, static_cast<double>(stats_.l2_hits), static_cast<double>(stats_.l2_misses), rec.time_s,
                 rec.active_ratio, report_.area_penalty),
            e_mem(ep, static_cast<double>(stats_.mem_accesses), rec.time_s),
            e_algo(ep, static_cast<double>(stats_.prof_accesses), rec.time_s,
                   static_cast<double>(stats_.transitions), report_.profiling),
            rec.time_s);

        elapsed_cycles_ += stats_.total_cycles();
        report_.intervals.push_back(std::move(rec));
        stats_ = IntervalStats{};
    }

    void finish_totals() {
        RunTotals &t = report_.totals;
        double l2 = 0.0, mem = 0.0, algo = 0.0;
        for (const IntervalRecord &r : report_.intervals) {
            const IntervalStats &s = r.stats;
            t.instructions += s.instructions;
            t.cycles += s.total_cycles();
            t.l2_accesses += s.l2_accesses;
            t.l2_hits += s.l2_hits;
            t.l2_misses += s.l2_misses;
            t.load_misses += s.load_misses;
            t.writebacks += s.writebacks;
            t.flush_writebacks += s.flush_writebacks;
            t.mem_accesses += s.mem_accesses;
            t.prof_accesses += s.prof_accesses;
            t.transitions += s.transitions;
            t.flushed_lines += r.flushed_lines;
            l2 += r.energy.e_l2;
            mem += r.energy.e_mem;
            algo += r.energy.e_algo;
        }
        t.time_s = static_cast<double>(t.cycles) / cfg_.timing.clock_hz;
        t.energy = make_breakdown(l2, mem, algo, t.time_s);
    }

    const RunConfig &cfg_;
    Policy policy_;
    CacheGeometry geom_;
    TimingModel timing_;
    std::uint64_t interval_length_;
    std::optional<ColoredCache> cache_;
    std::optional<DecayCache> decay_;
    std::optional<ProfilingCache> profiler_;
    std::optional<EnergyController> controller_;
    IntervalStats stats_;
    std::uint64_t elapsed_cycles_ = 0;
    std::uint32_t task_ = 0;
    RunReport report_;
};

double pct_change(double base, double tech) { return base == 0.0 ? 0.0 : (base - tech) / base * 100.0; }

} // namespace

RunReport run(const RunConfig &cfg, Policy policy) { return Simulation(cfg, policy).run(); }

ComparisonReport compare(const RunReport &base, const RunReport &tech) {
    if (!(base.geometry == tech.geometry))
        throw Error("compare: reports use different cache geometries");
    if (base.fingerprint != tech.fingerprint)
        throw Error("compare: reports come from different workloads\n  base: " + base.fingerprint +
                    "\n  tech: " + tech.fingerprint);
    ComparisonReport c;
    c.base_policy = base.policy;
    c.tech_policy = tech.policy;
    c.base_energy = base.totals.energy.total;
    c.tech_energy = tech.totals.energy.total;
    c.base_edp = base.totals.energy.edp;
    c.tech_edp = tech.totals.energy.edp;
    c.base_cycles = base.totals.cycles;
    c.tech_cycles = tech.totals.cycles;
    c.energy_saving_pct = pct_change(c.base_energy, c.tech_energy);
    c.edp_saving_pct = pct_change(c.base_edp, c.tech_edp);
    c.cycle_increase_pct =
        c.base_cycles == 0 ? 0.0
                           : (static_cast<double>(c.tech_cycles) - static_cast<double>(c.base_cycles)) /
                                 static_cast<double>(c.base_cycles) * 100.0;
    return c;
}

} // namespace colorcache
