#pragma once

#include <cstdint>
#include <string>

namespace apsd {

// Array geometry and endurance limits. Defaults give a desk-scale device
// (32 MiB data area) that fills in well under a second.
struct Geometry {
    uint32_t blocks = 256;
    uint32_t pages_per_block = 64;
    uint32_t page_data_bytes = 2048;
    uint32_t page_spare_bytes = 64;
    uint32_t erase_limit = 3000;
    uint32_t partial_program_limit = 8;
    uint32_t disturb_threshold = 64;

    static constexpr uint32_t kSectorBytes = 512;

    uint32_t sectors_per_page() const { return page_data_bytes / kSectorBytes; }
    uint32_t total_pages() const { return blocks * pages_per_block; }

    // Empty string when valid, else a message naming the bad field.
    std::string validate() const;
};

}  // namespace apsd
