#include "colorcache/controller.hpp"

#include <algorithm>
#include <stdexcept>

#include "colorcache/error.hpp"

namespace colorcache {

std::uint32_t ControllerConfig::resolved_min(std::uint32_t colors) const {
    return min_colors != 0 ? min_colors : std::max<std::uint32_t>(1, colors / 16);
}

void ControllerConfig::validate(std::uint32_t colors) const {
    if (interval_length == 0)
        throw ConfigError("controller.interval_length", "must be positive");
    if (granularity == 0)
        throw ConfigError("controller.granularity", "must be positive");
    if (favored_side + other_side + 1 > max_candidates)
        throw ConfigError("controller.max_candidates", "smaller than favored_side + other_side + 1");
    if (resolved_min(colors) > colors)
        throw ConfigError("controller.min_colors", "exceeds the color count");
    if (resolved_min(colors) < colors / 16)
        throw ConfigError("controller.min_colors", "below the smallest profiled size (colors/16)");
    if (lambda < 0.0)
        throw ConfigError("controller.lambda", "must be non-negative");
}

std::vector<std::uint32_t> build_config_space(std::uint32_t current, double gain, std::uint32_t colors,
                                              const ControllerConfig &cfg) {
    const std::uint32_t min = cfg.resolved_min(colors);
    const bool low_gain = gain <= cfg.lambda;
    const std::uint32_t below = low_gain ? cfg.favored_side : cfg.other_side;
    const std::uint32_t above = low_gain ? cfg.other_side : cfg.favored_side;
    const std::uint32_t step = cfg.granularity;

    std::vector<std::uint32_t> space;
    for (std::uint32_t i = below; i >= 1; --i) {
        if (std::uint64_t{i} * step > current)
            continue;
        const std::uint32_t c = current - i * step;
        if (c >= min)
            space.push_back(c);
    }
    space.push_back(current);
    for (std::uint32_t i = 1; i <= above; ++i) {
        const std::uint64_t c = current + std::uint64_t{i} * step;
        if (c <= colors)
            space.push_back(static_cast<std::uint32_t>(c));
    }
    return space;
}

std::uint32_t select_candidate(std::span<const Candidate> candidates) {
    if (candidates.empty())
        throw std::invalid_argument("select_candidate: no candidates");
    const Candidate *best = &candidates.front();
    for (const Candidate &c : candidates) {
        if (c.energy.total < best->energy.total ||
            (c.energy.total == best->energy.total && c.colors < best->colors))
            best = &c;
    }
    return best->colors;
}

EnergyController::EnergyController(const CacheGeometry &geom, const ControllerConfig &cfg,
                                   const EnergyParams &energy)
    : geom_(geom), cfg_(cfg), energy_(energy) {
    cfg_.validate(geom_.colors());
}

std::vector<Candidate> EnergyController::evaluate_candidates(std::span<const std::uint32_t> space,
                                                             std::uint32_t current,
                                                             const IntervalStats &stats,
                                                             const ProfilingCache &profiler,
                                                             const TimingModel &timing) const {
    const auto accesses = static_cast<double>(stats.l2_accesses);
    // Writeback traffic scales with misses at the live configuration's ratio.
    const double wb_ratio =
        stats.l2_misses > 0 ? static_cast<double>(stats.writebacks) / static_cast<double>(stats.l2_misses)
                            : 0.0;
    const auto prof_accesses = static_cast<double>(stats.prof_accesses);

    std::vector<Candidate> out;
    out.reserve(space.size());
    for (std::uint32_t colors : space) {
        Candidate c;
        c.colors = colors;
        c.est_load_misses = profiler.estimated_load_misses(colors);
        c.est_total_misses = profiler.estimated_total_misses(colors);
        c.est_cycles = timing.estimate_cycles(stats, c.est_load_misses);
        const double time_s = timing.seconds(c.est_cycles);
        const double misses = std::min(c.est_total_misses, accesses);
        const double hits = accesses - misses;
        const double mem = c.est_total_misses * (1.0 + wb_ratio);
        const auto delta = colors > current ? colors - current : current - colors;
        const double transitions = static_cast<double>(std::uint64_t{delta} * geom_.lines_per_color());
        c.energy = make_breakdown(e_l2(energy_, hits, misses, time_s, colors, geom_.colors(), true),
                                  e_mem(energy_, mem, time_s),
                                  e_algo(energy_, prof_accesses, time_s, transitions, true), time_s);
        out.push_back(c);
    }
    return out;
}

Decision EnergyController::on_interval_end(ColoredCache &cache, ProfilingCache &profiler,
                                           const IntervalStats &stats, const TimingModel &timing) const {
    Decision d;
    d.current = cache.active_colors();
    d.marginal_gain = profiler.marginal_gain(d.current);
    d.space = build_config_space(d.current, d.marginal_gain, geom_.colors(), cfg_);
    d.candidates = evaluate_candidates(d.space, d.current, stats, profiler, timing);
    d.chosen = select_candidate(d.candidates);
    d.reconfig = cache.reconfigure(d.chosen);
    profiler.reset();
    return d;
}

} // namespace colorcache
