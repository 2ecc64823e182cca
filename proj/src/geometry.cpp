#include "apsd/geometry.hpp"

#include "apsd/codec.hpp"

namespace apsd {

std::string Geometry::validate() const {
    if (blocks < 1) return "blocks must be >= 1";
    if (pages_per_block < 1) return "pages_per_block must be >= 1";
    if (page_data_bytes < 1 || page_data_bytes % kSectorBytes != 0)
        return "page_data_bytes must be a positive multiple of 512";
    if (page_spare_bytes < 1) return "page_spare_bytes must be >= 1";
    if (erase_limit < 1) return "erase_limit must be >= 1";
    if (partial_program_limit < 1) return "partial_program_limit must be >= 1";
    if (disturb_threshold < 1) return "disturb_threshold must be >= 1";
    uint32_t layout = spare::kParityOffset +
                      spare::kParityBytesPerSector * sectors_per_page();
    if (layout > page_spare_bytes)
        return "spare layout does not fit page_spare_bytes";
    return "";
}

}  // namespace apsd
