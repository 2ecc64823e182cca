#pragma once

#include <string>
#include <variant>
#include <vector>

#include "apsd/simulator.hpp"

namespace apsd {

// Little-endian binary snapshot:
//   "APSD" | u16 version=1
//   geometry 6 x u32 (blocks, pages_per_block, page_data_bytes,
//                     page_spare_bytes, erase_limit, partial_program_limit)
//   map-out bitmap (ceil(blocks/8) bytes, LSB-first)
//   per-block erase_count u32
//   per page: full_programs u8, partial_programs u8, disturb u16,
//             data bytes, spare bytes
//   mapping: count u32, then (lpa u32, block u32, page u32)
//   keystore: count u32, then ppa u64 + 16 key bytes
//             (an all-zero key marks a revoked crypto-erase page)
//   CRC-32 of all preceding bytes
constexpr uint16_t kSnapshotVersion = 1;

struct SnapshotError {
    std::string message;
};

std::vector<uint8_t> serialize_snapshot(const Simulator& sim);
bool save_snapshot(const Simulator& sim, const std::string& path);

// Rebuilds a simulator; seed, disturb threshold, costs and op_ratio come
// from the config (they are not part of the on-disk format).
std::variant<std::unique_ptr<Simulator>, SnapshotError>
load_snapshot(const std::string& path, const Config& config);

std::variant<std::unique_ptr<Simulator>, SnapshotError>
deserialize_snapshot(const std::vector<uint8_t>& bytes, const Config& config);

struct SnapshotInfo {
    uint16_t version;
    Geometry geometry;
    uint32_t mapped_out_blocks;
    uint32_t mapping_entries;
    uint32_t keystore_entries;
    bool crc_ok;
};

std::variant<SnapshotInfo, SnapshotError> snapshot_info(const std::string& path);

}  // namespace apsd
