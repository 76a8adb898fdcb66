#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "colorcache/geometry.hpp"

namespace colorcache {

// Multiples of colors/16 emulated by the profiling cache.
inline constexpr std::array<std::uint32_t, 6> kProfilingSixteenths = {1, 2, 4, 8, 12, 16};

// One emulated cache size: a tag-only, LRU, W-way array over the sampled sets
// of a cache with `colors` active colors under the default mapping.
class ProfilingPoint {
  public:
    ProfilingPoint(const CacheGeometry &geom, std::uint32_t colors, std::uint32_t sampling_ratio);

    std::uint32_t colors() const { return colors_; }
    std::uint32_t sampled_sets() const { return sampled_sets_; }
    std::uint64_t load_misses() const { return load_misses_; }
    std::uint64_t total_misses() const { return total_misses_; }
    std::uint64_t accesses() const { return accesses_; }

    // Caller guarantees the address falls in a sampled set. Returns true on hit.
    bool access(Addr addr, AccessKind kind, std::uint64_t stamp);
    void reset();

  private:
    struct Way {
        std::uint64_t tag = 0;
        std::uint64_t last_use = 0;
        bool valid = false;
    };

    CacheGeometry geom_;
    std::uint32_t colors_;
    std::uint32_t ratio_;
    std::uint32_t sampled_sets_;
    std::vector<Way> ways_;
    std::uint64_t load_misses_ = 0;
    std::uint64_t total_misses_ = 0;
    std::uint64_t accesses_ = 0;
};

struct ProfileOutcome {
    bool sampled = false;
    std::array<bool, kProfilingSixteenths.size()> hit{};
};

// Set-sampled multi-level profiling cache. Sampled sets are those whose
// within-color index is a multiple of the sampling ratio, so a level with c
// colors samples c * sets_per_color / R sets.
class ProfilingCache {
  public:
    // Throws ConfigError unless R divides sets_per_color and 16 divides colors.
    ProfilingCache(const CacheGeometry &geom, std::uint32_t sampling_ratio);

    const CacheGeometry &geometry() const { return geom_; }
    std::uint32_t sampling_ratio() const { return ratio_; }
    std::span<const ProfilingPoint> points() const { return points_; }
    std::uint64_t total_sampled_sets() const;
    // Lookups that reached the profiling cache (one per sampled L2 access).
    std::uint64_t accesses() const { return accesses_; }

    bool is_sampled(Addr addr) const { return geom_.within_color(addr) % ratio_ == 0; }
    ProfileOutcome access(Addr addr, AccessKind kind);

    // Scaled (x R) estimates; linear between profiling points.
    // Throws std::invalid_argument for c outside [colors/16, colors].
    double estimated_load_misses(std::uint32_t colors) const;
    double estimated_total_misses(std::uint32_t colors) const;
    // Misses saved per extra color on the segment enclosing c (right-hand
    // segment at interior points, left-hand at the top).
    double marginal_gain(std::uint32_t colors) const;

    void reset();

  private:
    template <typename Count> double interpolate(std::uint32_t colors, Count count) const;
    std::size_t segment_for(std::uint32_t colors) const;

    CacheGeometry geom_;
    std::uint32_t ratio_;
    std::vector<ProfilingPoint> points_;
    std::uint64_t accesses_ = 0;
    std::uint64_t stamp_ = 0;
};

// Miss-curve segment math on scaled counts; misses vary linearly between points.
double interpolate_misses(std::uint32_t c, std::uint32_t c_lo, double m_lo, std::uint32_t c_hi, double m_hi);
double segment_gain(std::uint32_t c_lo, double m_lo, std::uint32_t c_hi, double m_hi);

// Profiling-cache storage relative to the L2: 43T / (16R(8L + T)).
double storage_overhead(std::uint32_t tag_bits, std::uint32_t block_size, std::uint32_t sampling_ratio);

} // namespace colorcache
