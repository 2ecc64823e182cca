#include "apsd/snapshot.hpp"

#include <cstring>
#include <fstream>

#include "apsd/codec.hpp"

namespace apsd {

namespace {

constexpr char kMagic[4] = {'A', 'P', 'S', 'D'};

void put_u16(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(static_cast<uint8_t>(v));
    out.push_back(static_cast<uint8_t>(v >> 8));
}

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

struct Reader {
    const std::vector<uint8_t>& buf;
    size_t pos = 0;
    bool ok = true;

    bool need(size_t n) {
        if (pos + n > buf.size()) ok = false;
        return ok;
    }
    uint16_t u16() {
        if (!need(2)) return 0;
        uint16_t v = static_cast<uint16_t>(buf[pos] | (buf[pos + 1] << 8));
        pos += 2;
        return v;
    }
    uint32_t u32() {
        if (!need(4)) return 0;
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(buf[pos + i]) << (8 * i);
        pos += 4;
        return v;
    }
    uint64_t u64() {
        if (!need(8)) return 0;
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(buf[pos + i]) << (8 * i);
        pos += 8;
        return v;
    }
    void bytes(uint8_t* dst, size_t n) {
        if (!need(n)) return;
        memcpy(dst, buf.data() + pos, n);
        pos += n;
    }
};

}  // namespace

std::vector<uint8_t> serialize_snapshot(const Simulator& sim) {
    const Geometry& g = sim.config().geometry;
    const NandArray& nand = sim.nand();
    std::vector<uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    put_u16(out, kSnapshotVersion);
    put_u32(out, g.blocks);
    put_u32(out, g.pages_per_block);
    put_u32(out, g.page_data_bytes);
    put_u32(out, g.page_spare_bytes);
    put_u32(out, g.erase_limit);
    put_u32(out, g.partial_program_limit);

    std::vector<uint8_t> bitmap((g.blocks + 7) / 8, 0);
    for (uint32_t b = 0; b < g.blocks; ++b)
        if (nand.block(b).mapped_out) bitmap[b / 8] |= 1u << (b % 8);
    out.insert(out.end(), bitmap.begin(), bitmap.end());

    for (uint32_t b = 0; b < g.blocks; ++b) put_u32(out, nand.block(b).erase_count);

    for (uint32_t b = 0; b < g.blocks; ++b) {
        for (uint32_t p = 0; p < g.pages_per_block; ++p) {
            const PageState& page = nand.block(b).pages[p];
            out.push_back(page.full_programs);
            out.push_back(page.partial_programs);
            put_u16(out, page.disturb_count);
            out.insert(out.end(), page.data.begin(), page.data.end());
            out.insert(out.end(), page.spare.begin(), page.spare.end());
        }
    }

    auto mapping = sim.ftl().mapping_entries();
    put_u32(out, static_cast<uint32_t>(mapping.size()));
    for (auto [lpa, ppa] : mapping) {
        put_u32(out, lpa);
        put_u32(out, ppa / g.pages_per_block);
        put_u32(out, ppa % g.pages_per_block);
    }

    auto keys = sim.ftl().keystore_entries();
    put_u32(out, static_cast<uint32_t>(keys.size()));
    for (const auto& [ppa, key] : keys) {
        put_u64(out, ppa);
        out.insert(out.end(), key.begin(), key.end());
    }

    put_u32(out, crc32(out));
    return out;
}

bool save_snapshot(const Simulator& sim, const std::string& path) {
    auto bytes = serialize_snapshot(sim);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) return false;
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    return static_cast<bool>(f);
}

std::variant<std::unique_ptr<Simulator>, SnapshotError>
deserialize_snapshot(const std::vector<uint8_t>& bytes, const Config& config) {
    if (bytes.size() < 10 + 4) return SnapshotError{"truncated snapshot"};
    if (memcmp(bytes.data(), kMagic, 4) != 0) return SnapshotError{"bad magic"};

    uint32_t stored_crc = 0;
    for (int i = 0; i < 4; ++i)
        stored_crc |= static_cast<uint32_t>(bytes[bytes.size() - 4 + i]) << (8 * i);
    if (crc32({bytes.data(), bytes.size() - 4}) != stored_crc)
        return SnapshotError{"CRC mismatch"};

    Reader r{bytes, 4};
    uint16_t version = r.u16();
    if (version != kSnapshotVersion)
        return SnapshotError{"unsupported version " + std::to_string(version)};

    Config cfg = config;
    Geometry& g = cfg.geometry;
    g.blocks = r.u32();
    g.pages_per_block = r.u32();
    g.page_data_bytes = r.u32();
    g.page_spare_bytes = r.u32();
    g.erase_limit = r.u32();
    g.partial_program_limit = r.u32();
    if (!r.ok || !g.validate().empty()) return SnapshotError{"bad geometry"};

    auto sim = std::make_unique<Simulator>(cfg);
    NandArray& nand = sim->nand();

    std::vector<uint8_t> bitmap((g.blocks + 7) / 8);
    r.bytes(bitmap.data(), bitmap.size());
    for (uint32_t b = 0; b < g.blocks; ++b)
        nand.set_mapped_out(b, (bitmap[b / 8] >> (b % 8)) & 1);
    for (uint32_t b = 0; b < g.blocks; ++b)
        nand.mutable_block(b).erase_count = r.u32();
    for (uint32_t b = 0; b < g.blocks; ++b) {
        for (uint32_t p = 0; p < g.pages_per_block; ++p) {
            if (!r.need(4 + g.page_data_bytes + g.page_spare_bytes))
                return SnapshotError{"truncated page data"};
            PageState& page = nand.mutable_block(b).pages[p];
            page.full_programs = bytes[r.pos++];
            page.partial_programs = bytes[r.pos++];
            page.disturb_count = r.u16();
            r.bytes(page.data.data(), page.data.size());
            r.bytes(page.spare.data(), page.spare.size());
        }
    }

    std::vector<std::pair<uint32_t, Ppa>> mapping;
    uint32_t n = r.u32();
    for (uint32_t i = 0; i < n && r.ok; ++i) {
        uint32_t lpa = r.u32();
        uint32_t blk = r.u32();
        uint32_t pg = r.u32();
        if (blk >= g.blocks || pg >= g.pages_per_block)
            return SnapshotError{"mapping entry out of range"};
        mapping.emplace_back(lpa, blk * g.pages_per_block + pg);
    }

    std::vector<std::pair<Ppa, PageKey>> keys;
    uint32_t kn = r.u32();
    for (uint32_t i = 0; i < kn && r.ok; ++i) {
        uint64_t ppa = r.u64();
        PageKey key{};
        r.bytes(key.data(), key.size());
        if (ppa >= g.total_pages()) return SnapshotError{"keystore entry out of range"};
        keys.emplace_back(static_cast<Ppa>(ppa), key);
    }
    if (!r.ok) return SnapshotError{"truncated snapshot"};
    if (r.pos != bytes.size() - 4) return SnapshotError{"trailing garbage"};

    sim->ftl().restore(mapping, keys);
    return sim;
}

std::variant<std::unique_ptr<Simulator>, SnapshotError>
load_snapshot(const std::string& path, const Config& config) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return SnapshotError{"cannot open " + path};
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
    return deserialize_snapshot(bytes, config);
}

std::variant<SnapshotInfo, SnapshotError> snapshot_info(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return SnapshotError{"cannot open " + path};
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                               std::istreambuf_iterator<char>());
    Config cfg;
    auto loaded = deserialize_snapshot(bytes, cfg);
    if (auto* err = std::get_if<SnapshotError>(&loaded)) return *err;
    auto& sim = std::get<std::unique_ptr<Simulator>>(loaded);
    SnapshotInfo info;
    info.version = kSnapshotVersion;
    info.geometry = sim->config().geometry;
    info.mapped_out_blocks = 0;
    for (uint32_t b = 0; b < info.geometry.blocks; ++b)
        if (sim->nand().block(b).mapped_out) info.mapped_out_blocks++;
    info.mapping_entries = static_cast<uint32_t>(sim->ftl().mapping_entries().size());
    info.keystore_entries = static_cast<uint32_t>(sim->ftl().keystore_entries().size());
    info.crc_ok = true;
    return info;
}

}  // namespace apsd
