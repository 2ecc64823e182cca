#pragma once

#include <vector>

#include "apsd/config.hpp"
#include "apsd/rng.hpp"
#include "apsd/simulator.hpp"

// Small geometry keeps randomized tests fast; 512-byte pages still exercise
// the full sector codec.
inline apsd::Geometry small_geom() {
    apsd::Geometry g;
    g.blocks = 16;
    g.pages_per_block = 8;
    g.page_data_bytes = 512;
    g.page_spare_bytes = 64;
    g.erase_limit = 100;
    return g;
}

inline apsd::Config small_config(uint64_t seed = 7, double op_ratio = 0.1) {
    apsd::Config c;
    c.geometry = small_geom();
    c.seed = seed;
    c.op_ratio = op_ratio;
    return c;
}

inline std::vector<uint8_t> page_of(const apsd::Geometry& g, uint64_t seed) {
    return apsd::random_page(seed, g.page_data_bytes);
}
