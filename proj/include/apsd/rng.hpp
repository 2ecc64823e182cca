#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace apsd {

// splitmix64 finalizer; the basis for every deterministic byte stream in the
// simulator (disturb positions, trace payloads, per-page keystreams).
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline uint64_t mix64(uint64_t a, uint64_t b) { return mix64(mix64(a) ^ b); }

// Deterministic page payload for 'seed:<u64>' trace writes.
std::vector<uint8_t> random_page(uint64_t seed, uint32_t len);

using PageKey = std::array<uint8_t, 16>;

// Counter-mode keystream over mix64. Chunk j of 8 bytes is
// mix64(k0 ^ mix64(k1 + j)) little-endian, where k0/k1 are the two
// little-endian 64-bit words of the key. Stable across platforms; part of
// the crypto-erase contract.
void apply_keystream(const PageKey& key, uint8_t* buf, size_t len);

}  // namespace apsd
