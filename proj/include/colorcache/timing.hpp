#pragma once

#include <cstdint>
#include <optional>

#include "colorcache/colored_cache.hpp"

namespace colorcache {

// Per-interval counters. Cycle fields are derived from the event counts by
// TimingModel::advance, so they are always integral.
struct IntervalStats {
    std::uint64_t instructions = 0;
    std::uint64_t base_cycles = 0;
    std::uint64_t stall_cycles = 0;
    std::uint64_t l2_accesses = 0;
    std::uint64_t l2_hits = 0;
    std::uint64_t l2_misses = 0;
    std::uint64_t load_misses = 0;
    std::uint64_t writebacks = 0;   // eviction writebacks
    std::uint64_t flush_writebacks = 0;
    std::uint64_t mem_accesses = 0; // misses + charged writebacks
    std::uint64_t prof_accesses = 0;
    std::uint64_t transitions = 0;

    std::uint64_t total_cycles() const { return base_cycles + stall_cycles; }
};

struct TimingParams {
    double base_cpi = 1.0;
    std::uint32_t hit_latency = 18;  // cycles per L2 access; 12 ns at 1.5 GHz
    std::uint32_t mem_penalty = 90;  // cycles per load miss; 60 ns at 1.5 GHz
    double overlap = 1.0;            // fraction of the miss penalty that stalls, in (0, 1]
    double clock_hz = 1.5e9;

    void validate() const;
};

// Trace-driven stand-in for measured base/stall cycle counters, plus the
// penalty-per-miss extrapolation to other cache sizes.
class TimingModel {
  public:
    explicit TimingModel(const TimingParams &params);

    const TimingParams &params() const { return params_; }

    // Instructions retired without an L2 access (used when a record is split
    // across interval or preemption boundaries).
    void add_instructions(IntervalStats &stats, std::uint64_t instructions) const;
    // One L2 access preceded by instr_delta instructions.
    void advance(IntervalStats &stats, std::uint64_t instr_delta, AccessKind kind,
                 const AccessOutcome &outcome) const;

    // Stall cycles per load miss; falls back to the last committed interval's
    // value, or overlap * mem_penalty before any.
    double ppm(const IntervalStats &stats) const;
    // base + PPM * est_load_misses. Exact when est equals the measured count.
    double estimate_cycles(const IntervalStats &stats, double est_load_misses) const;
    double seconds(double cycles) const { return cycles / params_.clock_hz; }

    // Records this interval's PPM as the fallback for later intervals.
    void commit_interval(const IntervalStats &stats);
    std::optional<double> last_ppm() const { return last_ppm_; }

  private:
    void refresh(IntervalStats &stats) const;

    TimingParams params_;
    std::optional<double> last_ppm_;
};

} // namespace colorcache
