#pragma once

#include <cstdint>
#include <list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colorcache/energy.hpp"
#include "colorcache/geometry.hpp"
#include "colorcache/workload.hpp"

namespace colorcache {

struct RunReport;

namespace oracle {

// Textbook LRU cache: per-set recency lists, standard (block mod sets) indexing.
class ReferenceLru {
  public:
    ReferenceLru(std::uint32_t sets, std::uint32_t ways, std::uint32_t block_size);
    // Returns true on hit.
    bool access(Addr addr);

  private:
    std::uint32_t sets_;
    std::uint32_t ways_;
    std::uint32_t block_size_;
    std::vector<std::list<std::uint64_t>> recency_; // front = MRU, holds block numbers
};

struct MissCounts {
    std::uint64_t load_misses = 0;
    std::uint64_t total_misses = 0;
    bool operator==(const MissCounts &) const = default;
};

// Full, unsampled simulation of a `colors`-color cache (region r in color
// r mod colors) with the geometry's associativity.
MissCounts exact_misses(std::span<const TraceRecord> trace, const CacheGeometry &geom, std::uint32_t colors);

// Recomputes the memory sub-system energy of a finished run from its logged
// per-interval counters alone.
EnergyBreakdown exact_energy(const RunReport &report);

// Empty when the report's totals equal exact_energy bit for bit; otherwise a
// field-by-field diff.
std::optional<std::string> verify_energy(const RunReport &report);

} // namespace oracle
} // namespace colorcache
