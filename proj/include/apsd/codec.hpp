#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "apsd/geometry.hpp"

namespace apsd {

// Spare-area byte layout (bit-exact, part of the snapshot contract):
//   [0]      magic, 0xA5 when valid, 0x00 when poisoned
//   [1..3]   three flag copies, 0xFF = valid, majority decides
//   [4..7]   bitwise complement of CRC-32 of the data area, little-endian
//   [8..]    2 bytes per 512-byte sector: 13 Hamming parity bits,
//            1 overall-parity bit, 2 unused bits fixed 1
//   rest     reserved, 0xFF
namespace spare {
constexpr uint32_t kMagicOffset = 0;
constexpr uint32_t kFlagOffset = 1;
constexpr uint32_t kFlagCopies = 3;
constexpr uint32_t kCrcOffset = 4;
constexpr uint32_t kParityOffset = 8;
constexpr uint32_t kParityBytesPerSector = 2;
constexpr uint8_t kMagicValid = 0xA5;
constexpr uint8_t kMagicPoisoned = 0x00;
}  // namespace spare

enum class Verdict { Ok, Locked, Poisoned, Uncorrectable };

struct DecodeOutcome {
    Verdict verdict = Verdict::Uncorrectable;
    uint32_t corrected_bits = 0;     // valid for Ok
    std::vector<uint8_t> data;       // present only for Ok
};

// CRC-32 (reflected 0x04C11DB7, init/xorout 0xFFFFFFFF).
uint32_t crc32(std::span<const uint8_t> bytes);

std::vector<uint8_t> encode_spare(std::span<const uint8_t> data,
                                  const Geometry& geom);

// Fixed evaluation order: flag majority, magic, per-sector SEC-DED, CRC.
DecodeOutcome decode_page(std::span<const uint8_t> data,
                          std::span<const uint8_t> spare,
                          const Geometry& geom);

// Partial-program region, offset relative to the spare area. All-0x00 bytes
// in the region clear; 0xFF bytes leave the underlying cells untouched.
struct SpareMask {
    uint32_t offset;
    std::vector<uint8_t> bytes;
};

// Zeroes magic + CRC + parity, skips the flag copies. Programming only
// clears bits, so the mask applies regardless of current spare content.
SpareMask make_poison_mask(const Geometry& geom);
// Zeroes the three flag copies.
SpareMask make_flag_lock_mask(const Geometry& geom);

// A copy counts as valid iff it reads exactly 0xFF.
bool flag_majority_valid(std::span<const uint8_t> spare);

}  // namespace apsd
