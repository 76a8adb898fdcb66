#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "colorcache/colored_cache.hpp"

namespace colorcache {

struct DecayConfig {
    double decay_interval = 6.4e6; // cycles; infinity disables decay
    double sweep_period = 0.0;     // cycles; 0 selects decay_interval / 4

    double resolved_sweep() const;
    void validate() const;
};

// Decay-cache baseline over a fully active ColoredCache. A valid line idle
// for at least the decay interval is written back if dirty and gated; data
// and tags both decay. Per-line exact timestamps stand in for decay counters.
class DecayCache {
  public:
    DecayCache(const CacheGeometry &geom, const DecayConfig &cfg);

    const ColoredCache &cache() const { return cache_; }
    const DecayConfig &config() const { return cfg_; }

    AccessOutcome access(Addr addr, AccessKind kind, std::uint64_t now);
    struct SweepResult {
        std::uint64_t decayed = 0;
        std::uint64_t writebacks = 0;
    };
    SweepResult sweep(std::uint64_t now);
    // Task switch: every line's idle time restarts at now. Power state is kept.
    void reset(std::uint64_t now);

    // Runs all sweeps due up to now; sweeps fire at multiples of the sweep period.
    SweepResult sweep_until(std::uint64_t now);

    std::uint64_t last_access(std::uint32_t set, std::uint32_t way) const {
        return last_access_[std::size_t{set} * cache_.geometry().ways() + way];
    }

    // Time integral of powered lines since the last take_powered_integral().
    double take_powered_integral(std::uint64_t now);

  private:
    void account(std::uint64_t now);

    ColoredCache cache_;
    DecayConfig cfg_;
    std::vector<std::uint64_t> last_access_;
    double sweep_period_;
    double next_sweep_;
    std::uint64_t last_event_ = 0;
    double powered_integral_ = 0.0;
};

} // namespace colorcache
