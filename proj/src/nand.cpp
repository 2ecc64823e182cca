#include "apsd/nand.hpp"

#include <cassert>

#include "apsd/rng.hpp"

namespace apsd {

NandArray::NandArray(const Geometry& geom, uint64_t seed)
    : geom_(geom), seed_(seed) {
    blocks_.resize(geom_.blocks);
    for (auto& b : blocks_) {
        b.pages.resize(geom_.pages_per_block);
        for (auto& p : b.pages) {
            p.data.assign(geom_.page_data_bytes, 0xFF);
            p.spare.assign(geom_.page_spare_bytes, 0xFF);
        }
    }
}

PageState* NandArray::page_checked(uint32_t block, uint32_t page) {
    assert(block < geom_.blocks && page < geom_.pages_per_block);
    return &blocks_[block].pages[page];
}

NandStatus NandArray::erase_block(uint32_t block) {
    assert(block < geom_.blocks);
    BlockState& b = blocks_[block];
    if (b.mapped_out) return NandStatus::MappedOut;
    if (b.erase_count >= geom_.erase_limit) return NandStatus::WornOut;
    for (auto& p : b.pages) {
        std::fill(p.data.begin(), p.data.end(), 0xFF);
        std::fill(p.spare.begin(), p.spare.end(), 0xFF);
        p.full_programs = 0;
        p.partial_programs = 0;
        p.disturb_count = 0;
    }
    b.erase_count++;
    return NandStatus::Ok;
}

NandStatus NandArray::program_page(uint32_t block, uint32_t page,
                                   std::span<const uint8_t> data,
                                   std::span<const uint8_t> spare) {
    if (blocks_[block].mapped_out) return NandStatus::MappedOut;
    PageState* p = page_checked(block, page);
    if (p->full_programs >= 1) return NandStatus::AlreadyProgrammed;
    assert(data.size() == geom_.page_data_bytes);
    assert(spare.size() == geom_.page_spare_bytes);
    for (size_t i = 0; i < data.size(); ++i) p->data[i] &= data[i];
    for (size_t i = 0; i < spare.size(); ++i) p->spare[i] &= spare[i];
    p->full_programs = 1;
    disturb_neighbors(block, page, 1);
    return NandStatus::Ok;
}

NandStatus NandArray::partial_program(uint32_t block, uint32_t page,
                                      uint32_t offset,
                                      std::span<const uint8_t> bytes) {
    if (blocks_[block].mapped_out) return NandStatus::MappedOut;
    PageState* p = page_checked(block, page);
    if (p->partial_programs >= geom_.partial_program_limit)
        return NandStatus::LimitExceeded;
    assert(offset + bytes.size() <= geom_.page_data_bytes + geom_.page_spare_bytes);
    for (size_t i = 0; i < bytes.size(); ++i) {
        uint32_t at = offset + static_cast<uint32_t>(i);
        if (at < geom_.page_data_bytes)
            p->data[at] &= bytes[i];
        else
            p->spare[at - geom_.page_data_bytes] &= bytes[i];
    }
    p->partial_programs++;
    disturb_neighbors(block, page, 1);
    return NandStatus::Ok;
}

NandStatus NandArray::deletion_pulse(uint32_t block, uint32_t page) {
    if (blocks_[block].mapped_out) return NandStatus::MappedOut;
    PageState* p = page_checked(block, page);
    std::fill(p->data.begin(), p->data.end(), 0xFF);
    disturb_neighbors(block, page, 4);
    return NandStatus::Ok;
}

NandStatus NandArray::down_level(uint32_t block, uint32_t page) {
    if (blocks_[block].mapped_out) return NandStatus::MappedOut;
    PageState* p = page_checked(block, page);
    if (p->partial_programs >= geom_.partial_program_limit)
        return NandStatus::LimitExceeded;
    std::fill(p->data.begin(), p->data.end(), 0x00);
    p->partial_programs++;
    disturb_neighbors(block, page, 4);
    return NandStatus::Ok;
}

const PageState& NandArray::read_raw(uint32_t block, uint32_t page) const {
    assert(block < geom_.blocks && page < geom_.pages_per_block);
    return blocks_[block].pages[page];
}

void NandArray::disturb_neighbors(uint32_t block, uint32_t page, uint32_t amount) {
    if (page > 0) bump_disturb(block, page - 1, amount);
    if (page + 1 < geom_.pages_per_block) bump_disturb(block, page + 1, amount);
}

void NandArray::bump_disturb(uint32_t block, uint32_t page, uint32_t amount) {
    PageState& p = blocks_[block].pages[page];
    uint32_t old = p.disturb_count;
    uint32_t now = std::min<uint32_t>(old + amount, 0xFFFF);
    p.disturb_count = static_cast<uint16_t>(now);
    uint32_t t = geom_.disturb_threshold;
    // One injected 1->0 flip per threshold crossing, position derived from
    // (seed, block, page, crossing index).
    for (uint32_t k = old / t + 1; k <= now / t; ++k) {
        uint64_t h = mix64(mix64(seed_, (static_cast<uint64_t>(block) << 32) | page), k);
        uint32_t bit = static_cast<uint32_t>(h % (geom_.page_data_bytes * 8ULL));
        p.data[bit / 8] &= static_cast<uint8_t>(~(1u << (bit % 8)));
    }
}

}  // namespace apsd
