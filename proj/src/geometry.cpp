#include "colorcache/geometry.hpp"

#include "colorcache/error.hpp"

namespace colorcache {

CacheGeometry::CacheGeometry(std::uint32_t sets, std::uint32_t ways, std::uint32_t block_size,
                             std::uint32_t tag_bits, std::uint32_t page_size)
    : sets_(sets), ways_(ways), block_size_(block_size), tag_bits_(tag_bits),
      page_size_(page_size), colors_(0), sets_per_color_(0) {
    if (!is_pow2(sets))
        throw ConfigError("geometry.sets", "must be a power of two");
    if (!is_pow2(ways))
        throw ConfigError("geometry.ways", "must be a power of two");
    if (!is_pow2(block_size))
        throw ConfigError("geometry.block_size", "must be a power of two");
    if (!is_pow2(page_size) || page_size < block_size)
        throw ConfigError("geometry.page_size", "must be a power of two >= block_size");
    if (tag_bits == 0)
        throw ConfigError("geometry.tag_bits", "must be positive");
    const std::uint64_t span = std::uint64_t{sets} * block_size;
    if (span < page_size)
        throw ConfigError("geometry.page_size", "larger than one way of the cache");
    colors_ = static_cast<std::uint32_t>(span / page_size);
    sets_per_color_ = sets / colors_;
}

CacheGeometry CacheGeometry::default_l2() { return CacheGeometry(4096, 8, 64, 40, 4096); }

} // namespace colorcache
