#include "colorcache/colored_cache.hpp"

#include <algorithm>
#include <string>

#include "colorcache/error.hpp"

namespace colorcache {

ColoredCache::ColoredCache(const CacheGeometry &geom, std::uint32_t min_colors,
                           std::uint32_t initial_active)
    : geom_(geom), mapping_(geom.colors()), lines_(geom.lines()),
      active_(initial_active == 0 ? geom.colors() : initial_active),
      min_colors_(min_colors == 0 ? std::max<std::uint32_t>(1, geom.colors() / 16) : min_colors) {
    if (min_colors_ > geom_.colors())
        throw ConfigError("controller.min_colors", "exceeds the color count");
    if (active_ < min_colors_ || active_ > geom_.colors())
        throw ConfigError("controller.initial_colors", "outside [min_colors, colors]");
    mapping_.set_default(active_);
    const std::uint64_t first_off = std::uint64_t{active_} * geom_.lines_per_color();
    for (std::uint64_t i = first_off; i < lines_.size(); ++i)
        lines_[i].powered = false;
    powered_lines_ = first_off;
}

bool ColoredCache::flush_line(CacheLine &l) {
    const bool wb = l.dirty;
    l.valid = false;
    l.dirty = false;
    if (wb)
        ++counters_.flush_writebacks;
    return wb;
}

AccessOutcome ColoredCache::access(Addr addr, AccessKind kind) {
    AccessOutcome out;
    const std::uint32_t set = set_index(addr);
    const std::uint64_t tag = tag_of(addr);
    const std::uint32_t ways = geom_.ways();
    CacheLine *base = &lines_[std::size_t{set} * ways];
    out.set = set;
    ++clock_;

    for (std::uint32_t w = 0; w < ways; ++w) {
        CacheLine &l = base[w];
        if (l.valid && l.tag == tag) {
            l.last_use = clock_;
            if (kind == AccessKind::Store)
                l.dirty = true;
            ++counters_.hits;
            out.hit = true;
            out.way = w;
            return out;
        }
    }

    ++counters_.misses;
    if (kind == AccessKind::Load)
        ++counters_.load_misses;
    else
        ++counters_.store_misses;

    // Victim order: powered empty line, gated line, then LRU.
    std::uint32_t victim = ways;
    for (std::uint32_t w = 0; w < ways && victim == ways; ++w)
        if (base[w].powered && !base[w].valid)
            victim = w;
    for (std::uint32_t w = 0; w < ways && victim == ways; ++w)
        if (!base[w].powered)
            victim = w;
    if (victim == ways) {
        victim = 0;
        for (std::uint32_t w = 1; w < ways; ++w)
            if (base[w].last_use < base[victim].last_use)
                victim = w;
    }

    CacheLine &v = base[victim];
    if (!v.powered) {
        v.powered = true;
        ++transitions_;
        ++powered_lines_;
        out.powered_on = true;
    } else if (v.valid && v.dirty) {
        out.writeback = true;
        out.victim_addr = address_of(v.tag, set);
        ++counters_.writebacks;
    }
    v.valid = true;
    v.tag = tag;
    v.dirty = kind == AccessKind::Store;
    v.last_use = clock_;
    out.way = victim;
    return out;
}

ReconfigReport ColoredCache::reconfigure(std::uint32_t new_active) {
    if (new_active < min_colors_ || new_active > geom_.colors())
        throw ConfigError("reconfigure.new_active",
                          std::to_string(new_active) + " outside [" + std::to_string(min_colors_) +
                              ", " + std::to_string(geom_.colors()) + "]");
    ReconfigReport rep;
    rep.old_active = active_;
    rep.new_active = new_active;
    if (new_active == active_)
        return rep;

    const std::uint32_t spc = geom_.sets_per_color();
    const std::uint32_t ways = geom_.ways();
    const std::uint32_t colors = geom_.colors();
    auto color_lines = [&](std::uint32_t color) {
        return std::span<CacheLine>(&lines_[std::size_t{color} * spc * ways], std::size_t{spc} * ways);
    };

    // Colors leaving the active set: flush and gate.
    for (std::uint32_t c = new_active; c < active_; ++c) {
        for (CacheLine &l : color_lines(c)) {
            if (l.valid) {
                ++rep.flushed_lines;
                if (flush_line(l))
                    ++rep.writebacks;
            }
            if (l.powered) {
                l.powered = false;
                ++rep.powered_off;
            }
        }
    }
    // Colors joining the active set come up empty.
    for (std::uint32_t c = active_; c < new_active; ++c) {
        for (CacheLine &l : color_lines(c)) {
            if (!l.powered) {
                l.powered = true;
                ++rep.powered_on;
            }
        }
    }

    // Surviving colors: flush blocks of regions whose color changes.
    const std::uint32_t surviving = std::min(active_, new_active);
    for (std::uint32_t c = 0; c < surviving; ++c) {
        for (CacheLine &l : color_lines(c)) {
            if (!l.valid)
                continue;
            const auto region = static_cast<std::uint32_t>(l.tag % colors);
            if (region % new_active != c) {
                ++rep.flushed_lines;
                if (flush_line(l))
                    ++rep.writebacks;
            }
        }
    }

    mapping_.set_default(new_active);
    active_ = new_active;
    transitions_ += rep.transitions();
    powered_lines_ = powered_lines_ + rep.powered_on - rep.powered_off;
    return rep;
}

bool ColoredCache::power_off_line(std::uint32_t set, std::uint32_t way) {
    CacheLine &l = line_ref(set, way);
    if (!l.powered)
        return false;
    const bool wb = l.valid && flush_line(l);
    l.valid = false;
    l.powered = false;
    ++transitions_;
    --powered_lines_;
    return wb;
}

} // namespace colorcache
