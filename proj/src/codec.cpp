#include "apsd/codec.hpp"

#include <array>
#include <bit>
#include <cassert>

namespace apsd {

namespace {

constexpr uint32_t kSectorBits = Geometry::kSectorBytes * 8;  // 4096
constexpr uint32_t kParityBits = 13;
constexpr uint32_t kCodewordLen = kSectorBits + kParityBits;  // 4109

// Hamming position of data bit i: positions 1..4109 with powers of two
// reserved for parity bits.
const std::array<uint16_t, kSectorBits>& data_positions() {
    static const auto table = [] {
        std::array<uint16_t, kSectorBits> t{};
        uint32_t i = 0;
        for (uint32_t pos = 1; pos <= kCodewordLen && i < kSectorBits; ++pos) {
            if (std::has_single_bit(pos)) continue;
            t[i++] = static_cast<uint16_t>(pos);
        }
        return t;
    }();
    return table;
}

inline bool get_bit(const uint8_t* bytes, uint32_t i) {
    return (bytes[i / 8] >> (i % 8)) & 1;
}

inline void flip_bit(uint8_t* bytes, uint32_t i) {
    bytes[i / 8] ^= static_cast<uint8_t>(1u << (i % 8));
}

// XOR of the Hamming positions of all set data bits; bit j of the result is
// parity bit j. Second return: parity of the data bits themselves.
std::pair<uint16_t, int> sector_parity(const uint8_t* sec) {
    const auto& pos = data_positions();
    uint16_t p = 0;
    int data_parity = 0;
    for (uint32_t i = 0; i < kSectorBits; ++i) {
        if (get_bit(sec, i)) {
            p ^= pos[i];
            data_parity ^= 1;
        }
    }
    return {p, data_parity};
}

uint16_t pack_parity(uint16_t p13, int overall) {
    // byte0 = p0..p7, byte1 bits0..4 = p8..p12, bit5 = overall, bits6..7 = 1.
    return static_cast<uint16_t>((p13 & 0x1FFF) | (overall ? 0x2000 : 0) | 0xC000);
}

const std::array<uint32_t, 256>& crc_table() {
    static const auto table = [] {
        std::array<uint32_t, 256> t{};
        for (uint32_t n = 0; n < 256; ++n) {
            uint32_t c = n;
            for (int k = 0; k < 8; ++k)
                c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
            t[n] = c;
        }
        return t;
    }();
    return table;
}

}  // namespace

uint32_t crc32(std::span<const uint8_t> bytes) {
    uint32_t c = 0xFFFFFFFFu;
    for (uint8_t b : bytes) c = crc_table()[(c ^ b) & 0xFF] ^ (c >> 8);
    return c ^ 0xFFFFFFFFu;
}

std::vector<uint8_t> encode_spare(std::span<const uint8_t> data,
                                  const Geometry& geom) {
    assert(data.size() == geom.page_data_bytes);
    std::vector<uint8_t> sp(geom.page_spare_bytes, 0xFF);
    sp[spare::kMagicOffset] = spare::kMagicValid;
    for (uint32_t i = 0; i < spare::kFlagCopies; ++i)
        sp[spare::kFlagOffset + i] = 0xFF;
    uint32_t crc = ~crc32(data);
    for (int i = 0; i < 4; ++i)
        sp[spare::kCrcOffset + i] = static_cast<uint8_t>(crc >> (8 * i));
    for (uint32_t s = 0; s < geom.sectors_per_page(); ++s) {
        auto [p13, dp] = sector_parity(data.data() + s * Geometry::kSectorBytes);
        int overall = dp ^ (std::popcount(static_cast<uint32_t>(p13)) & 1);
        uint16_t packed = pack_parity(p13, overall);
        sp[spare::kParityOffset + 2 * s] = static_cast<uint8_t>(packed);
        sp[spare::kParityOffset + 2 * s + 1] = static_cast<uint8_t>(packed >> 8);
    }
    return sp;
}

bool flag_majority_valid(std::span<const uint8_t> spare_bytes) {
    int valid = 0;
    for (uint32_t i = 0; i < spare::kFlagCopies; ++i)
        if (spare_bytes[spare::kFlagOffset + i] == 0xFF) valid++;
    return valid >= 2;
}

DecodeOutcome decode_page(std::span<const uint8_t> data,
                          std::span<const uint8_t> spare_bytes,
                          const Geometry& geom) {
    assert(data.size() == geom.page_data_bytes);
    assert(spare_bytes.size() == geom.page_spare_bytes);
    DecodeOutcome out;

    if (!flag_majority_valid(spare_bytes)) {
        out.verdict = Verdict::Locked;
        return out;
    }
    uint8_t magic = spare_bytes[spare::kMagicOffset];
    if (magic == spare::kMagicPoisoned) {
        out.verdict = Verdict::Poisoned;
        return out;
    }
    if (magic != spare::kMagicValid) {
        out.verdict = Verdict::Uncorrectable;
        return out;
    }

    std::vector<uint8_t> corrected(data.begin(), data.end());
    uint32_t corrected_bits = 0;
    for (uint32_t s = 0; s < geom.sectors_per_page(); ++s) {
        uint8_t* sec = corrected.data() + s * Geometry::kSectorBytes;
        uint16_t stored = static_cast<uint16_t>(
            spare_bytes[spare::kParityOffset + 2 * s] |
            (spare_bytes[spare::kParityOffset + 2 * s + 1] << 8));
        uint16_t stored13 = stored & 0x1FFF;
        int stored_overall = (stored >> 13) & 1;

        auto [p13, dp] = sector_parity(sec);
        uint16_t syndrome = p13 ^ stored13;
        int recomputed_overall =
            dp ^ (std::popcount(static_cast<uint32_t>(stored13)) & 1);
        bool overall_mismatch = recomputed_overall != stored_overall;

        if (syndrome == 0 && !overall_mismatch) continue;
        if (!overall_mismatch) {
            // Even number of bit errors with a nonzero syndrome.
            out.verdict = Verdict::Uncorrectable;
            return out;
        }
        // Single-bit error: locate it.
        corrected_bits++;
        if (syndrome == 0) continue;  // the overall-parity bit itself
        if (std::has_single_bit(static_cast<uint32_t>(syndrome))) continue;  // a parity bit
        if (syndrome > kCodewordLen) {
            out.verdict = Verdict::Uncorrectable;
            return out;
        }
        uint32_t width = 31 - std::countl_zero(static_cast<uint32_t>(syndrome));
        uint32_t di = syndrome - width - 2;
        flip_bit(sec, di);
    }

    uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i)
        stored_crc |= static_cast<uint32_t>(spare_bytes[spare::kCrcOffset + i]) << (8 * i);
    if (~stored_crc != crc32(corrected)) {
        out.verdict = Verdict::Uncorrectable;
        return out;
    }
    out.verdict = Verdict::Ok;
    out.corrected_bits = corrected_bits;
    out.data = std::move(corrected);
    return out;
}

SpareMask make_poison_mask(const Geometry& geom) {
    SpareMask m;
    m.offset = 0;
    uint32_t len = spare::kParityOffset +
                   spare::kParityBytesPerSector * geom.sectors_per_page();
    m.bytes.assign(len, 0x00);
    // 0xFF over the flag copies: AND identity, cells untouched.
    for (uint32_t i = 0; i < spare::kFlagCopies; ++i)
        m.bytes[spare::kFlagOffset + i] = 0xFF;
    return m;
}

SpareMask make_flag_lock_mask(const Geometry&) {
    return {spare::kFlagOffset, std::vector<uint8_t>(spare::kFlagCopies, 0x00)};
}

}  // namespace apsd
