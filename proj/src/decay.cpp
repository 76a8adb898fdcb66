#include "colorcache/decay.hpp"

#include <algorithm>
#include <cmath>

#include "colorcache/error.hpp"

namespace colorcache {

double DecayConfig::resolved_sweep() const {
    if (sweep_period > 0.0)
        return sweep_period;
    return decay_interval / 4.0;
}

void DecayConfig::validate() const {
    if (!(decay_interval > 0.0))
        throw ConfigError("dct.decay_interval", "must be positive (inf disables decay)");
    if (sweep_period < 0.0 || std::isnan(sweep_period))
        throw ConfigError("dct.sweep_period", "must be non-negative");
}

DecayCache::DecayCache(const CacheGeometry &geom, const DecayConfig &cfg)
    : cache_(geom, 1, geom.colors()), cfg_(cfg), last_access_(geom.lines(), 0) {
    cfg_.validate();
    sweep_period_ = cfg_.resolved_sweep();
    next_sweep_ = sweep_period_;
}

void DecayCache::account(std::uint64_t now) {
    if (now > last_event_) {
        powered_integral_ += static_cast<double>(cache_.powered_lines()) * static_cast<double>(now - last_event_);
        last_event_ = now;
    }
}

AccessOutcome DecayCache::access(Addr addr, AccessKind kind, std::uint64_t now) {
    account(now);
    AccessOutcome out = cache_.access(addr, kind);
    last_access_[std::size_t{out.set} * cache_.geometry().ways() + out.way] = now;
    return out;
}

DecayCache::SweepResult DecayCache::sweep(std::uint64_t now) {
    account(now);
    SweepResult res;
    const std::uint32_t ways = cache_.geometry().ways();
    const std::uint32_t sets = cache_.geometry().sets();
    for (std::uint32_t s = 0; s < sets; ++s) {
        for (std::uint32_t w = 0; w < ways; ++w) {
            const CacheLine &l = cache_.line(s, w);
            if (!l.valid)
                continue;
            const std::uint64_t last = last_access_[std::size_t{s} * ways + w];
            if (last <= now && static_cast<double>(now - last) >= cfg_.decay_interval) {
                if (cache_.power_off_line(s, w))
                    ++res.writebacks;
                ++res.decayed;
            }
        }
    }
    return res;
}

DecayCache::SweepResult DecayCache::sweep_until(std::uint64_t now) {
    SweepResult total;
    if (!std::isfinite(sweep_period_))
        return total;
    while (next_sweep_ <= static_cast<double>(now)) {
        const SweepResult r = sweep(static_cast<std::uint64_t>(next_sweep_));
        total.decayed += r.decayed;
        total.writebacks += r.writebacks;
        next_sweep_ += sweep_period_;
    }
    return total;
}

void DecayCache::reset(std::uint64_t now) {
    account(now);
    std::fill(last_access_.begin(), last_access_.end(), now);
}

double DecayCache::take_powered_integral(std::uint64_t now) {
    account(now);
    const double v = powered_integral_;
    powered_integral_ = 0.0;
    return v;
}

} // namespace colorcache
