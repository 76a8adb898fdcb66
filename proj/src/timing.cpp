#include "colorcache/timing.hpp"

#include <cmath>

#include "colorcache/error.hpp"

namespace colorcache {

void TimingParams::validate() const {
    if (!(base_cpi >= 0.0) || !std::isfinite(base_cpi))
        throw ConfigError("timing.base_cpi", "must be a finite non-negative number");
    if (!(overlap > 0.0 && overlap <= 1.0))
        throw ConfigError("timing.overlap", "must lie in (0, 1]");
    if (!(clock_hz > 0.0) || !std::isfinite(clock_hz))
        throw ConfigError("timing.clock_hz", "must be positive");
}

TimingModel::TimingModel(const TimingParams &params) : params_(params) { params_.validate(); }

void TimingModel::refresh(IntervalStats &stats) const {
    stats.base_cycles = static_cast<std::uint64_t>(
                            std::llround(static_cast<double>(stats.instructions) * params_.base_cpi)) +
                        stats.l2_accesses * params_.hit_latency;
    stats.stall_cycles = static_cast<std::uint64_t>(std::llround(
        static_cast<double>(stats.load_misses) * params_.overlap * params_.mem_penalty));
}

void TimingModel::add_instructions(IntervalStats &stats, std::uint64_t instructions) const {
    stats.instructions += instructions;
    refresh(stats);
}

void TimingModel::advance(IntervalStats &stats, std::uint64_t instr_delta, AccessKind kind,
                          const AccessOutcome &outcome) const {
    stats.instructions += instr_delta;
    ++stats.l2_accesses;
    if (outcome.hit) {
        ++stats.l2_hits;
    } else {
        ++stats.l2_misses;
        if (kind == AccessKind::Load)
            ++stats.load_misses;
    }
    if (outcome.writeback)
        ++stats.writebacks;
    if (outcome.powered_on)
        ++stats.transitions;
    refresh(stats);
}

double TimingModel::ppm(const IntervalStats &stats) const {
    if (stats.load_misses > 0)
        return static_cast<double>(stats.stall_cycles) / static_cast<double>(stats.load_misses);
    if (last_ppm_)
        return *last_ppm_;
    return params_.overlap * params_.mem_penalty;
}

double TimingModel::estimate_cycles(const IntervalStats &stats, double est_load_misses) const {
    const auto base = static_cast<double>(stats.base_cycles);
    if (stats.load_misses == 0)
        return base + ppm(stats) * est_load_misses;
    // stall * est / misses in extended precision: integral inputs make the
    // round trip exact at est == misses.
    const long double stall = static_cast<long double>(stats.stall_cycles) * est_load_misses /
                              static_cast<long double>(stats.load_misses);
    return base + static_cast<double>(stall);
}

void TimingModel::commit_interval(const IntervalStats &stats) {
    if (stats.load_misses > 0)
        last_ppm_ = ppm(stats);
}

} // namespace colorcache
