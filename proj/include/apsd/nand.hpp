#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "apsd/geometry.hpp"

namespace apsd {

enum class NandStatus {
    Ok,
    WornOut,
    MappedOut,
    AlreadyProgrammed,
    LimitExceeded,
};

struct PageState {
    std::vector<uint8_t> data;
    std::vector<uint8_t> spare;
    uint8_t full_programs = 0;
    uint8_t partial_programs = 0;
    uint16_t disturb_count = 0;
};

struct BlockState {
    std::vector<PageState> pages;
    uint32_t erase_count = 0;
    bool mapped_out = false;
};

// Bit-accurate NAND array. Programming can only clear bits (old AND new);
// only erase_block returns a page to all 0xFF. Program/partial/pulse bump the
// in-block neighbors' disturb counters, and every crossing of a multiple of
// disturb_threshold flips one seeded-pseudorandom data bit of the neighbor.
class NandArray {
public:
    NandArray(const Geometry& geom, uint64_t seed);

    NandStatus erase_block(uint32_t block);
    NandStatus program_page(uint32_t block, uint32_t page,
                            std::span<const uint8_t> data,
                            std::span<const uint8_t> spare);
    // offset addresses the concatenated data||spare extent.
    NandStatus partial_program(uint32_t block, uint32_t page, uint32_t offset,
                               std::span<const uint8_t> bytes);
    // Single-page erase-like pulse: data area back to 0xFF, spare untouched,
    // erase_count untouched, neighbors disturbed at the pulse rate (+4).
    NandStatus deletion_pulse(uint32_t block, uint32_t page);
    // Down-level programming: zeroes the data area like a scrub but with
    // pulse-class disturb. Counts against the partial-program limit.
    NandStatus down_level(uint32_t block, uint32_t page);

    // Chip-level read: ignores mapped_out, no ECC.
    const PageState& read_raw(uint32_t block, uint32_t page) const;

    const Geometry& geometry() const { return geom_; }
    uint64_t seed() const { return seed_; }
    const BlockState& block(uint32_t b) const { return blocks_[b]; }
    BlockState& mutable_block(uint32_t b) { return blocks_[b]; }
    void set_mapped_out(uint32_t b, bool v) { blocks_[b].mapped_out = v; }

private:
    PageState* page_checked(uint32_t block, uint32_t page);
    void disturb_neighbors(uint32_t block, uint32_t page, uint32_t amount);
    void bump_disturb(uint32_t block, uint32_t page, uint32_t amount);

    Geometry geom_;
    uint64_t seed_;
    std::vector<BlockState> blocks_;
};

}  // namespace apsd
