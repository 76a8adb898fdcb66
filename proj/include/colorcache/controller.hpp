#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "colorcache/colored_cache.hpp"
#include "colorcache/energy.hpp"
#include "colorcache/profiler.hpp"
#include "colorcache/timing.hpp"

namespace colorcache {

struct ControllerConfig {
    std::uint64_t interval_length = 10'000'000; // instructions per task
    std::uint32_t max_candidates = 11;          // D, including the current size
    std::uint32_t min_colors = 0;               // 0 selects colors/16
    std::uint32_t granularity = 2;              // colors per step
    double lambda = 200.0;                      // marginal-gain threshold, misses per color
    std::uint32_t favored_side = 6;             // candidates on the side G points to
    std::uint32_t other_side = 4;
    std::uint32_t sampling_ratio = 64;

    std::uint32_t resolved_min(std::uint32_t colors) const;
    void validate(std::uint32_t colors) const;
};

struct Candidate {
    std::uint32_t colors = 0;
    double est_load_misses = 0.0;
    double est_total_misses = 0.0;
    double est_cycles = 0.0;
    EnergyBreakdown energy;
};

struct Decision {
    std::uint32_t current = 0;
    double marginal_gain = 0.0;
    std::vector<std::uint32_t> space;
    std::vector<Candidate> candidates;
    std::uint32_t chosen = 0;
    ReconfigReport reconfig;
};

// Candidate sizes around `current`: favored_side steps toward the side the
// gain suggests (down when gain <= lambda), other_side the other way, clipped
// to [min, colors] without compensation. Sorted ascending, includes current.
std::vector<std::uint32_t> build_config_space(std::uint32_t current, double gain, std::uint32_t colors,
                                              const ControllerConfig &cfg);

// Least total energy; ties go to fewer colors. Throws on an empty list.
std::uint32_t select_candidate(std::span<const Candidate> candidates);

class EnergyController {
  public:
    EnergyController(const CacheGeometry &geom, const ControllerConfig &cfg, const EnergyParams &energy);

    const ControllerConfig &config() const { return cfg_; }

    std::vector<Candidate> evaluate_candidates(std::span<const std::uint32_t> space,
                                               std::uint32_t current, const IntervalStats &stats,
                                               const ProfilingCache &profiler,
                                               const TimingModel &timing) const;

    // Chooses and applies the next configuration, then resets the profiler.
    Decision on_interval_end(ColoredCache &cache, ProfilingCache &profiler, const IntervalStats &stats,
                             const TimingModel &timing) const;

  private:
    CacheGeometry geom_;
    ControllerConfig cfg_;
    EnergyParams energy_;
};

} // namespace colorcache
