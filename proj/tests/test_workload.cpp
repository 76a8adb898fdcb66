#include <random>
#include <set>
#include <sstream>

#include "doctest.h"

#include "colorcache/error.hpp"
#include "colorcache/workload.hpp"

using namespace colorcache;

namespace {

std::size_t parse_error_position(const std::string &text, TraceFormat fmt) {
    std::istringstream in(text);
    try {
        parse_trace(in, fmt);
    } catch (const TraceParseError &e) {
        return e.position();
    }
    FAIL("expected a parse error");
    return 0;
}

// Runs a schedule to completion with each step executing its full limit.
std::vector<Schedule::Step> drain(Schedule &s) {
    std::vector<std::uint64_t> executed(s.budgets().size(), 0);
    std::vector<bool> finished(s.budgets().size(), false);
    std::vector<Schedule::Step> steps;
    for (;;) {
        const Schedule::Step st = s.step(executed, finished);
        if (st.done)
            break;
        executed[st.task] = st.limit;
        steps.push_back(st);
    }
    return steps;
}

} // namespace

TEST_CASE("text trace parsing") {
    std::istringstream in("# header\n\nL 0x1000 5\n  S 0xdeadbeef 0\nL 40 12  # trailing?\n");
    CHECK(parse_error_position(in.str(), TraceFormat::Text) == 5);

    std::istringstream ok("# header\n\nL 0x1000 5\n  S 0xDEADBEEF 0\nL 40 12\n");
    const auto recs = parse_trace(ok, TraceFormat::Text);
    REQUIRE(recs.size() == 3);
    CHECK(recs[0] == TraceRecord{AccessKind::Load, 0x1000, 5});
    CHECK(recs[1] == TraceRecord{AccessKind::Store, 0xdeadbeef, 0});
    CHECK(recs[2].address == 0x40);

    CHECK(parse_error_position("L 0x10 1\nX 0x10 1\n", TraceFormat::Text) == 2);
    CHECK(parse_error_position("L 0xzz 1\n", TraceFormat::Text) == 1);
    CHECK(parse_error_position("L 0x10\n", TraceFormat::Text) == 1);
    CHECK(parse_error_position("L 0x10 -1\n", TraceFormat::Text) == 1);
    CHECK(parse_error_position("L 0x10 99999999999\n", TraceFormat::Text) == 1);
}

TEST_CASE("binary trace parsing") {
    const std::vector<TraceRecord> recs = {{AccessKind::Store, 0x0102030405060708ull, 0x0a0b0c0d}};
    std::ostringstream out(std::ios::binary);
    write_trace(out, recs, TraceFormat::Binary);
    const std::string bytes = out.str();
    REQUIRE(bytes.size() == 13);
    CHECK(static_cast<unsigned char>(bytes[0]) == 1);
    CHECK(static_cast<unsigned char>(bytes[1]) == 0x08);
    CHECK(static_cast<unsigned char>(bytes[8]) == 0x01);
    CHECK(static_cast<unsigned char>(bytes[9]) == 0x0d);

    CHECK(parse_error_position(bytes + bytes.substr(0, 7), TraceFormat::Binary) == 13);
    std::string bad = bytes + bytes;
    bad[13] = 2;
    CHECK(parse_error_position(bad, TraceFormat::Binary) == 13);
    CHECK(format_for_path("a/b.bin") == TraceFormat::Binary);
    CHECK(format_for_path("a/b.trb") == TraceFormat::Binary);
    CHECK(format_for_path("a/b.txt") == TraceFormat::Text);
}

TEST_CASE("property: traces round-trip through both formats") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<TraceRecord> recs(rng() % 200);
        for (TraceRecord &r : recs) {
            r.kind = rng() % 2 ? AccessKind::Store : AccessKind::Load;
            r.address = rng();
            r.instr_delta = static_cast<std::uint32_t>(rng());
        }
        for (TraceFormat fmt : {TraceFormat::Text, TraceFormat::Binary}) {
            std::stringstream io;
            write_trace(io, recs, fmt);
            REQUIRE(parse_trace(io, fmt) == recs);
        }
    }
}

TEST_CASE("synthetic generators") {
    SyntheticParams p;
    p.length = 5000;
    p.working_set = 64 * 256;
    for (SyntheticKind kind : {SyntheticKind::Sequential, SyntheticKind::Loop, SyntheticKind::Random,
                               SyntheticKind::Mixed}) {
        CAPTURE(to_string(kind));
        CHECK(parse_synthetic_kind(to_string(kind)) == kind);
        const auto a = gen_synthetic(kind, p, 9);
        CHECK(a.size() == p.length);
        CHECK(a == gen_synthetic(kind, p, 9));
        for (const TraceRecord &r : a)
            REQUIRE(r.instr_delta <= 2 * p.mean_delta);
    }
    CHECK(gen_synthetic(SyntheticKind::Random, p, 1) != gen_synthetic(SyntheticKind::Random, p, 2));
    CHECK_THROWS_AS(parse_synthetic_kind("zipf"), ConfigError);

    const auto seq = gen_synthetic(SyntheticKind::Sequential, p, 0);
    for (std::size_t i = 0; i < seq.size(); ++i)
        REQUIRE(seq[i].address == (i * 64) % p.working_set);

    const auto loop = gen_synthetic(SyntheticKind::Loop, p, 0);
    std::set<Addr> blocks;
    for (const TraceRecord &r : loop)
        blocks.insert(r.address / 64);
    CHECK(blocks.size() == 256);

    SyntheticParams leaky = p;
    leaky.locality = 0.5;
    blocks.clear();
    for (const TraceRecord &r : gen_synthetic(SyntheticKind::Loop, leaky, 0))
        blocks.insert(r.address / 64);
    CHECK(blocks.size() > 256 + 2000);

    SyntheticParams bad = p;
    bad.stride = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = p;
    bad.locality = 1.5;
    CHECK_THROWS_AS(bad.validate(), ConfigError);

    SyntheticSource endless(SyntheticKind::Random, p, 3, true);
    for (std::uint64_t i = 0; i < 2 * p.length; ++i)
        REQUIRE(endless.next().has_value());
}

TEST_CASE("task address tagging is injective") {
    std::mt19937_64 rng(11);
    std::set<Addr> seen;
    for (std::uint32_t t = 0; t < 3; ++t)
        for (int i = 0; i < 1000; ++i) {
            const Addr local = rng() & kTaskAddressMask;
            const Addr tagged = tag_address(t, local);
            REQUIRE((tagged & kTaskAddressMask) == local);
            REQUIRE((tagged >> kTaskAddressBits) == t + 1);
            seen.insert(tagged);
        }
    CHECK(seen.size() == 3000);
}

TEST_CASE("preemptive schedule") {
    Schedule s = Schedule::preemptive({300, 300, 300}, 80, 130);
    const auto steps = drain(s);
    REQUIRE(steps.size() == 5);
    const std::size_t order[] = {0, 1, 2, 0, 1};
    const std::uint64_t limits[] = {80, 130, 300, 300, 300};
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(steps[i].task == order[i]);
        CHECK(steps[i].limit == limits[i]);
        CHECK(steps[i].switched == (i > 0));
    }
    CHECK(s.switches() == 4);

    CHECK_THROWS_AS(Schedule::preemptive({300, 300}, 80, 130), ConfigError);
    CHECK_THROWS_AS(Schedule::preemptive({300, 300, 300}, 300, 130), ConfigError);
}

TEST_CASE("finished tasks are skipped") {
    Schedule s = Schedule::preemptive({300, 300, 300}, 80, 130);
    std::vector<std::uint64_t> executed(3, 0);
    std::vector<bool> finished(3, false);
    Schedule::Step st = s.step(executed, finished);
    CHECK(st.task == 0);
    finished[0] = true; // trace ran out early
    executed[0] = 50;
    st = s.step(executed, finished);
    CHECK(st.task == 1);
    executed[1] = 130;
    st = s.step(executed, finished);
    CHECK(st.task == 2);
    executed[2] = 300;
    st = s.step(executed, finished);
    CHECK(st.task == 1);
    CHECK(st.limit == 300);
    executed[1] = 300;
    CHECK(s.step(executed, finished).done);
}

TEST_CASE("sequential schedule") {
    Schedule s = Schedule::sequential({10, 20});
    const auto steps = drain(s);
    REQUIRE(steps.size() == 2);
    CHECK(steps[1].task == 1);
    CHECK(s.switches() == 1);
}
