#include "colorcache/workload.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "colorcache/error.hpp"

namespace colorcache {

namespace {

constexpr std::size_t kBinaryRecordSize = 13;

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string_view next_token(std::string_view &s) {
    s = trim(s);
    const auto end = s.find_first_of(" \t");
    std::string_view tok = s.substr(0, end);
    s = end == std::string_view::npos ? std::string_view{} : s.substr(end);
    return tok;
}

template <typename T> bool parse_number(std::string_view tok, T &out, int base) {
    if (tok.empty())
        return false;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out, base);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

} // namespace

TraceFormat format_for_path(std::string_view path) {
    auto ends_with = [&](std::string_view suffix) {
        return path.size() >= suffix.size() && path.substr(path.size() - suffix.size()) == suffix;
    };
    return ends_with(".bin") || ends_with(".trb") ? TraceFormat::Binary : TraceFormat::Text;
}

std::optional<TraceRecord> TraceReader::next() {
    return format_ == TraceFormat::Text ? next_text() : next_binary();
}

std::optional<TraceRecord> TraceReader::next_text() {
    std::string raw;
    while (std::getline(*in_, raw)) {
        ++line_;
        std::string_view rest = trim(raw);
        if (rest.empty() || rest.front() == '#')
            continue;
        TraceRecord rec;
        const std::string_view kind = next_token(rest);
        if (kind == "L")
            rec.kind = AccessKind::Load;
        else if (kind == "S")
            rec.kind = AccessKind::Store;
        else
            throw TraceParseError(line_, "invalid access kind '" + std::string(kind) + "' on line");
        std::string_view addr = next_token(rest);
        if (addr.starts_with("0x") || addr.starts_with("0X"))
            addr.remove_prefix(2);
        if (!parse_number(addr, rec.address, 16))
            throw TraceParseError(line_, "invalid hex address on line");
        if (!parse_number(next_token(rest), rec.instr_delta, 10))
            throw TraceParseError(line_, "invalid instruction delta on line");
        if (!trim(rest).empty())
            throw TraceParseError(line_, "trailing characters on line");
        return rec;
    }
    if (in_->bad())
        throw TraceParseError(line_, "read failure after line");
    return std::nullopt;
}

std::optional<TraceRecord> TraceReader::next_binary() {
    std::array<unsigned char, kBinaryRecordSize> buf{};
    in_->read(reinterpret_cast<char *>(buf.data()), buf.size());
    const auto got = static_cast<std::size_t>(in_->gcount());
    if (got == 0)
        return std::nullopt;
    if (got != buf.size())
        throw TraceParseError(offset_, "truncated binary record at byte");
    if (buf[0] > 1)
        throw TraceParseError(offset_, "invalid access kind at byte");
    TraceRecord rec;
    rec.kind = buf[0] == 0 ? AccessKind::Load : AccessKind::Store;
    rec.address = 0;
    for (int i = 7; i >= 0; --i)
        rec.address = (rec.address << 8) | buf[1 + i];
    rec.instr_delta = 0;
    for (int i = 3; i >= 0; --i)
        rec.instr_delta = (rec.instr_delta << 8) | buf[9 + i];
    offset_ += buf.size();
    return rec;
}

TraceFileSource::TraceFileSource(const std::string &path) {
    const TraceFormat fmt = format_for_path(path);
    auto file = std::make_unique<std::ifstream>(
        path, fmt == TraceFormat::Binary ? std::ios::in | std::ios::binary : std::ios::in);
    if (!*file)
        throw Error("cannot open trace file '" + path + "'");
    stream_ = std::move(file);
    reader_ = std::make_unique<TraceReader>(*stream_, fmt);
}

TraceFileSource::~TraceFileSource() = default;

std::optional<TraceRecord> TraceFileSource::next() { return reader_->next(); }

std::vector<TraceRecord> parse_trace(std::istream &in, TraceFormat format) {
    TraceReader reader(in, format);
    std::vector<TraceRecord> out;
    while (auto rec = reader.next())
        out.push_back(*rec);
    return out;
}

void write_trace(std::ostream &out, std::span<const TraceRecord> records, TraceFormat format) {
    if (format == TraceFormat::Text) {
        std::array<char, 64> line{};
        for (const TraceRecord &r : records) {
            const int n = std::snprintf(line.data(), line.size(), "%c 0x%llx %u\n",
                                        r.kind == AccessKind::Load ? 'L' : 'S',
                                        static_cast<unsigned long long>(r.address), r.instr_delta);
            out.write(line.data(), n);
        }
        return;
    }
    std::array<unsigned char, kBinaryRecordSize> buf{};
    for (const TraceRecord &r : records) {
        buf[0] = r.kind == AccessKind::Load ? 0 : 1;
        for (int i = 0; i < 8; ++i)
            buf[1 + i] = static_cast<unsigned char>(r.address >> (8 * i));
        for (int i = 0; i < 4; ++i)
            buf[9 + i] = static_cast<unsigned char>(r.instr_delta >> (8 * i));
        out.write(reinterpret_cast<const char *>(buf.data()), buf.size());
    }
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
    if (name == "sequential")
        return SyntheticKind::Sequential;
    if (name == "loop")
        return SyntheticKind::Loop;
    if (name == "random")
        return SyntheticKind::Random;
    if (name == "mixed")
        return SyntheticKind::Mixed;
    throw ConfigError("kind", "unknown synthetic trace kind '" + std::string(name) + "'");
}

std::string_view to_string(SyntheticKind kind) {
    switch (kind) {
    case SyntheticKind::Sequential:
        return "sequential";
    case SyntheticKind::Loop:
        return "loop";
    case SyntheticKind::Random:
        return "random";
    case SyntheticKind::Mixed:
        return "mixed";
    }
    return "unknown";
}

void SyntheticParams::validate() const {
    if (length == 0)
        throw ConfigError("length", "must be positive");
    if (working_set == 0)
        throw ConfigError("working_set", "must be positive");
    if (stride == 0)
        throw ConfigError("stride", "must be positive");
    if (working_set < stride)
        throw ConfigError("working_set", "smaller than one stride");
    if (!(locality >= 0.0 && locality <= 1.0))
        throw ConfigError("locality", "must lie in [0, 1]");
    if (!(store_fraction >= 0.0 && store_fraction <= 1.0))
        throw ConfigError("store_fraction", "must lie in [0, 1]");
    if (phase_length == 0)
        throw ConfigError("phase_length", "must be positive");
    if (base + 4 * working_set >= kTaskAddressMask)
        throw ConfigError("working_set", "address range exceeds the task address space");
}

SyntheticSource::SyntheticSource(SyntheticKind kind, const SyntheticParams &params, std::uint64_t seed,
                                 bool unbounded)
    : kind_(kind), params_(params), unbounded_(unbounded), rng_(seed) {
    params_.validate();
}

double SyntheticSource::uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

std::uint64_t SyntheticSource::below(std::uint64_t n) { return rng_() % n; }

Addr SyntheticSource::loop_addr(std::uint64_t bytes) {
    const std::uint64_t elems = std::max<std::uint64_t>(1, bytes / params_.stride);
    const Addr a = params_.base + (loop_pos_ % elems) * params_.stride;
    ++loop_pos_;
    return a;
}

// Streaming blocks live above every loop/random region and are never revisited.
Addr SyntheticSource::stream_addr() {
    const Addr start = params_.base + 4 * params_.working_set;
    const std::uint64_t span = kTaskAddressMask - start;
    return start + (stream_pos_++ * params_.stride) % span;
}

std::optional<TraceRecord> SyntheticSource::next() {
    if (!unbounded_ && produced_ == params_.length)
        return std::nullopt;
    TraceRecord rec;
    const std::uint64_t ws = params_.working_set;
    switch (kind_) {
    case SyntheticKind::Sequential:
        rec.address = params_.base + (produced_ * params_.stride) % ws;
        break;
    case SyntheticKind::Loop:
        rec.address = uniform01() < params_.locality ? loop_addr(ws) : stream_addr();
        break;
    case SyntheticKind::Random:
        rec.address = params_.base + below(std::max<std::uint64_t>(1, ws / params_.stride)) * params_.stride;
        break;
    case SyntheticKind::Mixed:
        switch ((produced_ / params_.phase_length) % 4) {
        case 0:
            rec.address = loop_addr(ws / 4);
            break;
        case 1:
            rec.address = stream_addr();
            break;
        case 2:
            rec.address = loop_addr(ws);
            break;
        default:
            rec.address = params_.base +
                          below(std::max<std::uint64_t>(1, 2 * ws / params_.stride)) * params_.stride;
            break;
        }
        break;
    }
    rec.kind = uniform01() < params_.store_fraction ? AccessKind::Store : AccessKind::Load;
    rec.instr_delta = params_.mean_delta == 0
                          ? 0
                          : static_cast<std::uint32_t>(below(2ull * params_.mean_delta + 1));
    ++produced_;
    return rec;
}

std::vector<TraceRecord> gen_synthetic(SyntheticKind kind, const SyntheticParams &params, std::uint64_t seed) {
    SyntheticSource src(kind, params, seed);
    std::vector<TraceRecord> out;
    out.reserve(params.length);
    while (auto rec = src.next())
        out.push_back(*rec);
    return out;
}

Schedule::Schedule(std::vector<std::uint64_t> budgets, std::vector<Segment> segments)
    : budgets_(std::move(budgets)), segments_(std::move(segments)) {
    for (const Segment &s : segments_)
        if (s.task >= budgets_.size())
            throw ConfigError("workload.schedule", "segment refers to a missing task");
}

Schedule Schedule::preemptive(std::vector<std::uint64_t> budgets, std::uint64_t p1, std::uint64_t p2) {
    if (budgets.size() != 3)
        throw ConfigError("workload.tasks", "preemptive pattern needs exactly three tasks");
    if (p1 == 0 || p1 >= budgets[0])
        throw ConfigError("workload.p1", "must lie strictly inside task 1's budget");
    if (p2 == 0 || p2 >= budgets[1])
        throw ConfigError("workload.p2", "must lie strictly inside task 2's budget");
    const auto b = budgets;
    return Schedule(budgets, {{0, p1}, {1, p2}, {2, b[2]}, {0, b[0]}, {1, b[1]}});
}

Schedule Schedule::sequential(std::vector<std::uint64_t> budgets) {
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < budgets.size(); ++i)
        segs.push_back({i, budgets[i]});
    return Schedule(std::move(budgets), std::move(segs));
}

Schedule::Step Schedule::step(std::span<const std::uint64_t> executed, const std::vector<bool> &finished) {
    while (cursor_ < segments_.size()) {
        const Segment &seg = segments_[cursor_];
        const std::uint64_t limit = std::min(seg.until, budgets_[seg.task]);
        if (finished[seg.task] || executed[seg.task] >= limit) {
            ++cursor_;
            continue;
        }
        Step st;
        st.task = seg.task;
        st.limit = limit;
        st.switched = last_task_.has_value() && *last_task_ != seg.task;
        if (st.switched)
            ++switches_;
        last_task_ = seg.task;
        return st;
    }
    Step st;
    st.done = true;
    return st;
}

} // namespace colorcache
