#include "colorcache/profiler.hpp"

#include <stdexcept>
#include <string>

#include "colorcache/error.hpp"

namespace colorcache {

ProfilingPoint::ProfilingPoint(const CacheGeometry &geom, std::uint32_t colors,
                               std::uint32_t sampling_ratio)
    : geom_(geom), colors_(colors), ratio_(sampling_ratio),
      sampled_sets_(colors * (geom.sets_per_color() / sampling_ratio)),
      ways_(std::size_t{sampled_sets_} * geom.ways()) {}

bool ProfilingPoint::access(Addr addr, AccessKind kind, std::uint64_t stamp) {
    const std::uint32_t color = region_of(addr, geom_) % colors_;
    const std::uint32_t set = color * (geom_.sets_per_color() / ratio_) + geom_.within_color(addr) / ratio_;
    const std::uint64_t tag = geom_.page_of(addr);
    const std::uint32_t nways = geom_.ways();
    Way *base = &ways_[std::size_t{set} * nways];
    ++accesses_;

    std::uint32_t victim = 0;
    for (std::uint32_t w = 0; w < nways; ++w) {
        if (base[w].valid && base[w].tag == tag) {
            base[w].last_use = stamp;
            return true;
        }
        if (!base[w].valid) {
            if (base[victim].valid)
                victim = w;
        } else if (base[victim].valid && base[w].last_use < base[victim].last_use) {
            victim = w;
        }
    }
    ++total_misses_;
    if (kind == AccessKind::Load)
        ++load_misses_;
    base[victim] = Way{tag, stamp, true};
    return false;
}

void ProfilingPoint::reset() {
    for (Way &w : ways_)
        w = Way{};
    load_misses_ = total_misses_ = accesses_ = 0;
}

ProfilingCache::ProfilingCache(const CacheGeometry &geom, std::uint32_t sampling_ratio)
    : geom_(geom), ratio_(sampling_ratio) {
    if (sampling_ratio == 0 || geom_.sets_per_color() % sampling_ratio != 0)
        throw ConfigError("controller.sampling_ratio",
                          "must divide sets_per_color (" + std::to_string(geom_.sets_per_color()) + ")");
    if (geom_.colors() % 16 != 0)
        throw ConfigError("geometry", "color count must be a multiple of 16 for profiling");
    points_.reserve(kProfilingSixteenths.size());
    for (std::uint32_t k : kProfilingSixteenths)
        points_.emplace_back(geom_, k * geom_.colors() / 16, ratio_);
}

std::uint64_t ProfilingCache::total_sampled_sets() const {
    std::uint64_t s = 0;
    for (const auto &p : points_)
        s += p.sampled_sets();
    return s;
}

ProfileOutcome ProfilingCache::access(Addr addr, AccessKind kind) {
    ProfileOutcome out;
    if (!is_sampled(addr))
        return out;
    out.sampled = true;
    ++accesses_;
    ++stamp_;
    for (std::size_t i = 0; i < points_.size(); ++i)
        out.hit[i] = points_[i].access(addr, kind, stamp_);
    return out;
}

std::size_t ProfilingCache::segment_for(std::uint32_t colors) const {
    if (colors < points_.front().colors() || colors > points_.back().colors())
        throw std::invalid_argument("colors " + std::to_string(colors) + " outside profiled range");
    for (std::size_t i = 0; i + 1 < points_.size(); ++i)
        if (colors < points_[i + 1].colors())
            return i;
    return points_.size() - 2;
}

template <typename Count>
double ProfilingCache::interpolate(std::uint32_t colors, Count count) const {
    const std::size_t seg = segment_for(colors);
    const ProfilingPoint &lo = points_[seg];
    const ProfilingPoint &hi = points_[seg + 1];
    const double m_lo = static_cast<double>(count(lo)) * ratio_;
    const double m_hi = static_cast<double>(count(hi)) * ratio_;
    return interpolate_misses(colors, lo.colors(), m_lo, hi.colors(), m_hi);
}

double ProfilingCache::estimated_load_misses(std::uint32_t colors) const {
    return interpolate(colors, [](const ProfilingPoint &p) { return p.load_misses(); });
}

double ProfilingCache::estimated_total_misses(std::uint32_t colors) const {
    return interpolate(colors, [](const ProfilingPoint &p) { return p.total_misses(); });
}

double ProfilingCache::marginal_gain(std::uint32_t colors) const {
    const std::size_t seg = segment_for(colors);
    const ProfilingPoint &lo = points_[seg];
    const ProfilingPoint &hi = points_[seg + 1];
    const double m_lo = static_cast<double>(lo.load_misses()) * ratio_;
    const double m_hi = static_cast<double>(hi.load_misses()) * ratio_;
    return segment_gain(lo.colors(), m_lo, hi.colors(), m_hi);
}

void ProfilingCache::reset() {
    for (auto &p : points_)
        p.reset();
    accesses_ = 0;
    stamp_ = 0;
}

double interpolate_misses(std::uint32_t c, std::uint32_t c_lo, double m_lo, std::uint32_t c_hi, double m_hi) {
    if (c == c_lo)
        return m_lo;
    if (c == c_hi)
        return m_hi;
    const double t = static_cast<double>(c - c_lo) / static_cast<double>(c_hi - c_lo);
    return m_lo + (m_hi - m_lo) * t;
}

double segment_gain(std::uint32_t c_lo, double m_lo, std::uint32_t c_hi, double m_hi) {
    return (m_lo - m_hi) / static_cast<double>(c_hi - c_lo);
}

double storage_overhead(std::uint32_t tag_bits, std::uint32_t block_size, std::uint32_t sampling_ratio) {
    const double t = tag_bits;
    return 43.0 * t / (16.0 * sampling_ratio * (8.0 * block_size + t));
}

} // namespace colorcache
