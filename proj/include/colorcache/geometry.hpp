#pragma once

#include <cstdint>

namespace colorcache {

using Addr = std::uint64_t;

enum class AccessKind : std::uint8_t { Load = 0, Store = 1 };

inline constexpr bool is_pow2(std::uint64_t v) { return v != 0 && (v & (v - 1)) == 0; }

// Static shape of the colored L2. A color is the group of sets addressed
// by one page worth of blocks, so colors = sets * block_size / page_size.
class CacheGeometry {
  public:
    // Throws ConfigError when the shape is not a valid colored cache.
    CacheGeometry(std::uint32_t sets, std::uint32_t ways, std::uint32_t block_size,
                  std::uint32_t tag_bits, std::uint32_t page_size);

    // 2MB, 8-way, 64B lines, 4KB pages: 4096 sets, 64 colors.
    static CacheGeometry default_l2();

    std::uint32_t sets() const { return sets_; }
    std::uint32_t ways() const { return ways_; }
    std::uint32_t block_size() const { return block_size_; }
    std::uint32_t tag_bits() const { return tag_bits_; }
    std::uint32_t page_size() const { return page_size_; }
    std::uint32_t colors() const { return colors_; }
    std::uint32_t sets_per_color() const { return sets_per_color_; }
    std::uint64_t lines() const { return std::uint64_t{sets_} * ways_; }
    std::uint64_t capacity_bytes() const { return lines() * block_size_; }
    std::uint64_t lines_per_color() const { return std::uint64_t{sets_per_color_} * ways_; }

    std::uint64_t block_of(Addr addr) const { return addr / block_size_; }
    std::uint64_t page_of(Addr addr) const { return addr / page_size_; }
    // Set offset inside a color; identical for every color.
    std::uint32_t within_color(Addr addr) const {
        return static_cast<std::uint32_t>(block_of(addr) % sets_per_color_);
    }

    bool operator==(const CacheGeometry &) const = default;

  private:
    std::uint32_t sets_;
    std::uint32_t ways_;
    std::uint32_t block_size_;
    std::uint32_t tag_bits_;
    std::uint32_t page_size_;
    std::uint32_t colors_;
    std::uint32_t sets_per_color_;
};

// Memory region of an address: page number modulo the color count.
inline std::uint32_t region_of(Addr addr, const CacheGeometry &geom) {
    return static_cast<std::uint32_t>(geom.page_of(addr) % geom.colors());
}

// Global set of an address in a cache whose color c maps region r to r mod c.
inline std::uint32_t default_set_index(Addr addr, const CacheGeometry &geom,
                                       std::uint32_t active_colors) {
    const std::uint32_t color = region_of(addr, geom) % active_colors;
    return color * geom.sets_per_color() + geom.within_color(addr);
}

} // namespace colorcache
