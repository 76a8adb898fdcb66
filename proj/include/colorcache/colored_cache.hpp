#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "colorcache/geometry.hpp"

namespace colorcache {

// Region -> color indirection. Always canonical: region r maps to r mod active.
class MappingTable {
  public:
    explicit MappingTable(std::uint32_t regions) : map_(regions) { set_default(regions); }

    void set_default(std::uint32_t active_colors) {
        for (std::uint32_t r = 0; r < map_.size(); ++r)
            map_[r] = r % active_colors;
    }
    std::uint32_t operator[](std::uint32_t region) const { return map_[region]; }
    std::span<const std::uint32_t> entries() const { return map_; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(map_.size()); }

  private:
    std::vector<std::uint32_t> map_;
};

// A powered-off line is never valid and never dirty.
struct CacheLine {
    std::uint64_t tag = 0;
    std::uint64_t last_use = 0;
    bool valid = false;
    bool dirty = false;
    bool powered = true;
};

struct AccessOutcome {
    bool hit = false;
    bool writeback = false;  // a dirty victim was evicted
    Addr victim_addr = 0;    // meaningful only when writeback is set
    bool powered_on = false; // the fill had to power a line back on
    std::uint32_t set = 0;
    std::uint32_t way = 0;
};

struct ReconfigReport {
    std::uint32_t old_active = 0;
    std::uint32_t new_active = 0;
    std::uint64_t flushed_lines = 0;
    std::uint64_t writebacks = 0;
    std::uint64_t powered_on = 0;
    std::uint64_t powered_off = 0;

    std::uint64_t transitions() const { return powered_on + powered_off; }
};

struct CacheCounters {
    std::uint64_t hits = 0;
    std::uint64_t misses = 0;
    std::uint64_t load_misses = 0;
    std::uint64_t store_misses = 0;
    std::uint64_t writebacks = 0;       // eviction writebacks
    std::uint64_t flush_writebacks = 0; // reconfiguration and decay writebacks
};

// Set-associative, LRU, write-back/write-allocate cache whose sets are
// grouped into colors. Colors at or above the active count are powered off.
class ColoredCache {
  public:
    // min_colors == 0 selects colors/16 (at least 1); initial_active == 0 selects all colors.
    explicit ColoredCache(const CacheGeometry &geom, std::uint32_t min_colors = 0,
                          std::uint32_t initial_active = 0);

    const CacheGeometry &geometry() const { return geom_; }
    const MappingTable &mapping() const { return mapping_; }
    const CacheCounters &counters() const { return counters_; }
    std::uint32_t active_colors() const { return active_; }
    std::uint32_t min_colors() const { return min_colors_; }
    double active_ratio() const {
        return static_cast<double>(active_) / static_cast<double>(geom_.colors());
    }
    // Q: every line power-on and power-off event so far.
    std::uint64_t transitions() const { return transitions_; }
    std::uint64_t powered_lines() const { return powered_lines_; }

    std::uint32_t set_index(Addr addr) const {
        return mapping_[region_of(addr, geom_)] * geom_.sets_per_color() + geom_.within_color(addr);
    }
    // Tags hold the full page number so a line's region is recoverable after remapping.
    std::uint64_t tag_of(Addr addr) const { return geom_.page_of(addr); }
    Addr address_of(std::uint64_t tag, std::uint32_t set) const {
        return tag * geom_.page_size() +
               Addr{set % geom_.sets_per_color()} * geom_.block_size();
    }

    AccessOutcome access(Addr addr, AccessKind kind);

    // Resizes to new_active colors and flushes every line whose region
    // moves to a different color. Throws ConfigError outside [min, colors].
    ReconfigReport reconfigure(std::uint32_t new_active);

    std::span<const CacheLine> lines() const { return lines_; }
    const CacheLine &line(std::uint32_t set, std::uint32_t way) const {
        return lines_[std::size_t{set} * geom_.ways() + way];
    }
    // Invalidates and gates one line. Returns true when it held dirty data.
    // No-op (returns false) on a line that is already off.
    bool power_off_line(std::uint32_t set, std::uint32_t way);

  private:
    CacheLine &line_ref(std::uint32_t set, std::uint32_t way) {
        return lines_[std::size_t{set} * geom_.ways() + way];
    }
    // Invalidates a valid line; returns whether a writeback is due.
    bool flush_line(CacheLine &l);

    CacheGeometry geom_;
    MappingTable mapping_;
    std::vector<CacheLine> lines_;
    std::uint32_t active_;
    std::uint32_t min_colors_;
    std::uint64_t transitions_ = 0;
    std::uint64_t powered_lines_ = 0;
    std::uint64_t clock_ = 0;
    CacheCounters counters_;
};

} // namespace colorcache
