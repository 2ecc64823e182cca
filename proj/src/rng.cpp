#include "apsd/rng.hpp"

namespace apsd {

std::vector<uint8_t> random_page(uint64_t seed, uint32_t len) {
    std::vector<uint8_t> out(len);
    for (uint32_t i = 0; i < len; i += 8) {
        uint64_t w = mix64(seed, i / 8);
        for (uint32_t j = 0; j < 8 && i + j < len; ++j)
            out[i + j] = static_cast<uint8_t>(w >> (8 * j));
    }
    return out;
}

void apply_keystream(const PageKey& key, uint8_t* buf, size_t len) {
    uint64_t k0 = 0, k1 = 0;
    for (int i = 0; i < 8; ++i) {
        k0 |= static_cast<uint64_t>(key[i]) << (8 * i);
        k1 |= static_cast<uint64_t>(key[8 + i]) << (8 * i);
    }
    for (size_t i = 0; i < len; i += 8) {
        uint64_t w = mix64(k0 ^ mix64(k1 + i / 8));
        for (size_t j = 0; j < 8 && i + j < len; ++j)
            buf[i + j] ^= static_cast<uint8_t>(w >> (8 * j));
    }
}

}  // namespace apsd
