#include "apsd/forensics.hpp"

#include <algorithm>
#include <sstream>

namespace apsd {

ChipDump chip_dump(const NandArray& nand) {
    const Geometry& g = nand.geometry();
    ChipDump d;
    d.geom = g;
    d.data.reserve(g.total_pages());
    d.spare.reserve(g.total_pages());
    for (uint32_t b = 0; b < g.blocks; ++b) {
        const BlockState& blk = nand.block(b);
        d.erase_counts.push_back(blk.erase_count);
        d.mapped_out.push_back(blk.mapped_out);
        for (uint32_t p = 0; p < g.pages_per_block; ++p) {
            d.data.push_back(blk.pages[p].data);
            d.spare.push_back(blk.pages[p].spare);
        }
    }
    return d;
}

void ReferenceStore::note_write(uint32_t lpa, std::vector<uint8_t> plaintext,
                                std::vector<uint8_t> stored, uint32_t ppa) {
    WriteHistory& h = writes[lpa];
    h.plaintext = std::move(plaintext);
    h.stored = std::move(stored);
    h.history.push_back(ppa);
}

void ReferenceStore::note_relocation(uint32_t lpa, uint32_t to_ppa) {
    auto it = writes.find(lpa);
    if (it != writes.end()) it->second.history.push_back(to_ppa);
}

void ReferenceStore::note_deletion(uint32_t lpa, std::string technique,
                                   bool controller_denied) {
    deletions.push_back({lpa, std::move(technique), controller_denied});
}

namespace {

bool is_blank(const std::vector<uint8_t>& bytes) {
    bool all_ff = true, all_00 = true;
    for (uint8_t b : bytes) {
        if (b != 0xFF) all_ff = false;
        if (b != 0x00) all_00 = false;
        if (!all_ff && !all_00) return false;
    }
    return true;
}

// Best byte-match fraction of raw cells vs a reference image, identity and
// bitwise-NOT readings both tried. Blank pages carry no data.
double match_fraction(const std::vector<uint8_t>& raw,
                      const std::vector<uint8_t>& ref) {
    if (raw.size() != ref.size() || ref.empty()) return 0;
    if (is_blank(raw)) return 0;
    size_t id = 0, inv = 0;
    for (size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] == ref[i]) id++;
        if (static_cast<uint8_t>(~raw[i]) == ref[i]) inv++;
    }
    return static_cast<double>(std::max(id, inv)) / static_cast<double>(ref.size());
}

}  // namespace

RecoveryEntry recover_page(const ChipDump& dump, const ReferenceStore& ref,
                           uint32_t lpa) {
    RecoveryEntry e;
    e.lpa = lpa;
    auto it = ref.writes.find(lpa);
    if (it == ref.writes.end()) return e;
    for (uint32_t ppa : it->second.history) {
        double plain = match_fraction(dump.data[ppa], it->second.plaintext);
        double stored = match_fraction(dump.data[ppa], it->second.stored);
        if (plain > e.chip_recoverable) {
            e.chip_recoverable = plain;
            e.locations.assign(1, ppa);
        } else if (plain == e.chip_recoverable && plain > 0) {
            e.locations.push_back(ppa);
        }
        e.stored_recoverable = std::max(e.stored_recoverable, stored);
    }
    return e;
}

std::vector<UnmappedPage> scan_unmapped(const ChipDump& dump,
                                        const std::vector<bool>& mapped) {
    std::vector<UnmappedPage> out;
    uint32_t ppb = dump.geom.pages_per_block;
    for (uint32_t ppa = 0; ppa < dump.data.size(); ++ppa) {
        if (ppa < mapped.size() && mapped[ppa]) continue;
        if (is_blank(dump.data[ppa])) continue;
        uint32_t nonblank = 0;
        for (uint8_t b : dump.data[ppa])
            if (b != 0xFF && b != 0x00) nonblank++;
        out.push_back({ppa / ppb, ppa % ppb, nonblank});
    }
    return out;
}

RecoveryReport residual_report(const ChipDump& dump, const ReferenceStore& ref) {
    struct Acc {
        uint32_t n = 0;
        double controller = 0, chip = 0, stored = 0;
    };
    std::map<std::string, Acc> by_technique;
    for (const DeletionRecord& d : ref.deletions) {
        RecoveryEntry e = recover_page(dump, ref, d.lpa);
        Acc& a = by_technique[d.technique];
        a.n++;
        a.controller += d.controller_denied ? 0.0 : 1.0;
        a.chip += e.chip_recoverable;
        a.stored += e.stored_recoverable;
    }
    RecoveryReport rep;
    for (const auto& [name, a] : by_technique) {
        TechniqueResidualRow row;
        row.technique = name;
        row.lpa_count = a.n;
        row.controller_recoverable = a.controller / a.n;
        row.chip_recoverable_mean = a.chip / a.n;
        row.stored_recoverable_mean = a.stored / a.n;
        rep.rows.push_back(row);
    }
    rep.footnotes.push_back(
        "scrubbing: bit-level model reports 0.0 residual; published score "
        "matrix rates scrubbing efficacy as medium");
    rep.footnotes.push_back(
        "encryption: crypto-erase itself is fast; the published speed score "
        "reflects write-path overhead and is not asserted here");
    return rep;
}

std::string report_csv(const RecoveryReport& report) {
    std::ostringstream os;
    os << "technique,lpa_count,controller_recoverable,chip_recoverable_mean\n";
    for (const auto& r : report.rows) {
        char buf[160];
        snprintf(buf, sizeof(buf), "%s,%u,%.6f,%.6f\n", r.technique.c_str(),
                 r.lpa_count, r.controller_recoverable, r.chip_recoverable_mean);
        os << buf;
    }
    for (const auto& f : report.footnotes) os << "# " << f << "\n";
    return os.str();
}

}  // namespace apsd
