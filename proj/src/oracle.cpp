#include "colorcache/oracle.hpp"

#include <algorithm>
#include <cstring>
#include <sstream>

#include "colorcache/runner.hpp"

namespace colorcache::oracle {

ReferenceLru::ReferenceLru(std::uint32_t sets, std::uint32_t ways, std::uint32_t block_size)
    : sets_(sets), ways_(ways), block_size_(block_size), recency_(sets) {}

bool ReferenceLru::access(Addr addr) {
    const std::uint64_t block = addr / block_size_;
    auto &set = recency_[block % sets_];
    const auto it = std::find(set.begin(), set.end(), block);
    if (it != set.end()) {
        set.splice(set.begin(), set, it);
        return true;
    }
    set.push_front(block);
    if (set.size() > ways_)
        set.pop_back();
    return false;
}

MissCounts exact_misses(std::span<const TraceRecord> trace, const CacheGeometry &geom, std::uint32_t colors) {
    std::vector<std::list<std::uint64_t>> sets(std::size_t{colors} * geom.sets_per_color());
    MissCounts counts;
    for (const TraceRecord &r : trace) {
        const std::uint64_t block = geom.block_of(r.address);
        auto &set = sets[default_set_index(r.address, geom, colors)];
        const auto it = std::find(set.begin(), set.end(), block);
        if (it != set.end()) {
            set.splice(set.begin(), set, it);
            continue;
        }
        ++counts.total_misses;
        if (r.kind == AccessKind::Load)
            ++counts.load_misses;
        set.push_front(block);
        if (set.size() > geom.ways())
            set.pop_back();
    }
    return counts;
}

namespace {

struct Recomputed {
    double l2 = 0.0;
    double mem = 0.0;
    double algo = 0.0;
};

Recomputed interval_energy(const RunReport &report, const IntervalRecord &rec) {
    const EnergyParams &p = report.energy_params;
    const IntervalStats &s = rec.stats;
    const double time = static_cast<double>(s.base_cycles + s.stall_cycles) / report.clock_hz;
    const double leak = report.area_penalty ? p.p_leak_l2 * (1.0 + p.area_leak_penalty) : p.p_leak_l2;
    Recomputed e;
    e.l2 = p.e_dyn_l2 * (static_cast<double>(s.l2_hits) + 2.0 * static_cast<double>(s.l2_misses)) +
           leak * time * rec.active_ratio;
    e.mem = p.e_dyn_mem * static_cast<double>(s.mem_accesses) + p.p_leak_mem * time;
    const double tran = p.e_tran * static_cast<double>(s.transitions);
    e.algo = report.profiling
                 ? p.e_dyn_prof * static_cast<double>(s.prof_accesses) + p.p_leak_prof * time + tran
                 : tran;
    return e;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

EnergyBreakdown exact_energy(const RunReport &report) {
    Recomputed sum;
    std::uint64_t cycles = 0;
    for (const IntervalRecord &rec : report.intervals) {
        const Recomputed e = interval_energy(report, rec);
        sum.l2 += e.l2;
        sum.mem += e.mem;
        sum.algo += e.algo;
        cycles += rec.stats.base_cycles + rec.stats.stall_cycles;
    }
    const double time = static_cast<double>(cycles) / report.clock_hz;
    EnergyBreakdown b;
    b.e_l2 = sum.l2;
    b.e_mem = sum.mem;
    b.e_algo = sum.algo;
    b.total = sum.l2 + sum.mem + sum.algo;
    b.edp = b.total * time;
    return b;
}

std::optional<std::string> verify_energy(const RunReport &report) {
    std::ostringstream diff;
    diff.precision(17);
    auto check = [&](const char *what, double reported, double expected) {
        if (!same_bits(reported, expected))
            diff << what << ": reported " << reported << ", recomputed " << expected << '\n';
    };
    for (const IntervalRecord &rec : report.intervals) {
        const Recomputed e = interval_energy(report, rec);
        const std::string at = "interval " + std::to_string(rec.index) + " ";
        check((at + "e_l2").c_str(), rec.energy.e_l2, e.l2);
        check((at + "e_mem").c_str(), rec.energy.e_mem, e.mem);
        check((at + "e_algo").c_str(), rec.energy.e_algo, e.algo);
        check((at + "total").c_str(), rec.energy.total, e.l2 + e.mem + e.algo);
    }
    const EnergyBreakdown b = exact_energy(report);
    check("e_l2", report.totals.energy.e_l2, b.e_l2);
    check("e_mem", report.totals.energy.e_mem, b.e_mem);
    check("e_algo", report.totals.energy.e_algo, b.e_algo);
    check("total", report.totals.energy.total, b.total);
    check("edp", report.totals.energy.edp, b.edp);
    const std::string s = diff.str();
    if (s.empty())
        return std::nullopt;
    return s;
}

} // namespace colorcache::oracle
