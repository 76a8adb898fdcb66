#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "colorcache/geometry.hpp"

namespace colorcache {

// One L2 access, preceded by instr_delta instructions that did not reach the L2.
struct TraceRecord {
    AccessKind kind = AccessKind::Load;
    Addr address = 0;
    std::uint32_t instr_delta = 0;

    bool operator==(const TraceRecord &) const = default;
};

// Text: one `L|S <hex addr> <decimal delta>` per line ('#' comments and blank
// lines allowed). Binary: packed little-endian 13-byte records
// {u8 kind (0 load, 1 store), u64 address, u32 delta}.
enum class TraceFormat { Text, Binary };

TraceFormat format_for_path(std::string_view path);

class TraceSource {
  public:
    virtual ~TraceSource() = default;
    virtual std::optional<TraceRecord> next() = 0;
};

// Streams records from an input stream; throws TraceParseError with the line
// number (text) or byte offset (binary) of the first malformed record.
class TraceReader : public TraceSource {
  public:
    TraceReader(std::istream &in, TraceFormat format) : in_(&in), format_(format) {}
    std::optional<TraceRecord> next() override;

  private:
    std::optional<TraceRecord> next_text();
    std::optional<TraceRecord> next_binary();

    std::istream *in_;
    TraceFormat format_;
    std::size_t line_ = 0;
    std::size_t offset_ = 0;
};

// Owns its stream; opens `path` in the format its extension implies.
class TraceFileSource : public TraceSource {
  public:
    explicit TraceFileSource(const std::string &path);
    ~TraceFileSource() override;
    std::optional<TraceRecord> next() override;

  private:
    std::unique_ptr<std::istream> stream_;
    std::unique_ptr<TraceReader> reader_;
};

class VectorSource : public TraceSource {
  public:
    explicit VectorSource(std::vector<TraceRecord> records) : records_(std::move(records)) {}
    std::optional<TraceRecord> next() override {
        if (pos_ == records_.size())
            return std::nullopt;
        return records_[pos_++];
    }

  private:
    std::vector<TraceRecord> records_;
    std::size_t pos_ = 0;
};

std::vector<TraceRecord> parse_trace(std::istream &in, TraceFormat format);
void write_trace(std::ostream &out, std::span<const TraceRecord> records, TraceFormat format);

enum class SyntheticKind { Sequential, Loop, Random, Mixed };

SyntheticKind parse_synthetic_kind(std::string_view name);
std::string_view to_string(SyntheticKind kind);

struct SyntheticParams {
    std::uint64_t length = 100'000;        // records
    std::uint64_t working_set = 1ull << 20; // bytes
    std::uint64_t stride = 64;
    double locality = 1.0;       // loop: probability an access hits the loop
    double store_fraction = 0.3;
    std::uint32_t mean_delta = 20; // instructions between L2 accesses
    std::uint64_t phase_length = 50'000; // mixed: records per phase
    Addr base = 0;

    void validate() const;
};

// Deterministic generator. sequential: one pass of stride steps, wrapping at
// working_set. loop: cycles the working set, with 1 - locality of accesses
// going to never-reused streaming blocks. random: uniform blocks of the
// working set. mixed: rotates small loop / stream / full loop / random phases.
class SyntheticSource : public TraceSource {
  public:
    // unbounded ignores params.length and never ends.
    SyntheticSource(SyntheticKind kind, const SyntheticParams &params, std::uint64_t seed,
                    bool unbounded = false);
    std::optional<TraceRecord> next() override;

  private:
    double uniform01();
    std::uint64_t below(std::uint64_t n);
    Addr loop_addr(std::uint64_t bytes);
    Addr stream_addr();

    SyntheticKind kind_;
    SyntheticParams params_;
    bool unbounded_;
    std::mt19937_64 rng_;
    std::uint64_t produced_ = 0;
    std::uint64_t loop_pos_ = 0;
    std::uint64_t stream_pos_ = 0;
};

std::vector<TraceRecord> gen_synthetic(SyntheticKind kind, const SyntheticParams &params, std::uint64_t seed);

// Each task owns a disjoint physical address space: the task tag occupies the
// bits above kTaskAddressBits and task-local addresses are truncated below it.
inline constexpr unsigned kTaskAddressBits = 40;
inline constexpr Addr kTaskAddressMask = (Addr{1} << kTaskAddressBits) - 1;
inline Addr tag_address(std::uint32_t task_id, Addr addr) {
    return (Addr{task_id} + 1) << kTaskAddressBits | (addr & kTaskAddressMask);
}

// Ordered run segments: each runs a task until its executed instruction count
// reaches `until` (capped at its budget) or its trace ends.
class Schedule {
  public:
    struct Segment {
        std::size_t task;
        std::uint64_t until;
    };
    struct Step {
        bool done = false;
        std::size_t task = 0;
        std::uint64_t limit = 0;
        bool switched = false; // a different task ran before this one
    };

    Schedule(std::vector<std::uint64_t> budgets, std::vector<Segment> segments);

    // T1 until p1, T2 until p2, T3 to completion, then the rest of T1 and T2.
    static Schedule preemptive(std::vector<std::uint64_t> budgets, std::uint64_t p1, std::uint64_t p2);
    // Each task to completion, in order.
    static Schedule sequential(std::vector<std::uint64_t> budgets);

    std::span<const std::uint64_t> budgets() const { return budgets_; }
    std::span<const Segment> segments() const { return segments_; }

    // Next runnable segment given per-task progress; finished marks tasks whose trace ran out.
    Step step(std::span<const std::uint64_t> executed, const std::vector<bool> &finished);
    std::size_t switches() const { return switches_; }

  private:
    std::vector<std::uint64_t> budgets_;
    std::vector<Segment> segments_;
    std::size_t cursor_ = 0;
    std::optional<std::size_t> last_task_;
    std::size_t switches_ = 0;
};

} // namespace colorcache
