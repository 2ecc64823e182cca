#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "apsd/geometry.hpp"
#include "apsd/nand.hpp"

namespace apsd {

// Immutable chip-level image: every page's raw bytes, including mapped-out
// blocks, plus erase counts. This is what a desoldering attacker sees.
struct ChipDump {
    Geometry geom;
    std::vector<std::vector<uint8_t>> data;   // per ppa
    std::vector<std::vector<uint8_t>> spare;  // per ppa
    std::vector<uint32_t> erase_counts;       // per block
    std::vector<bool> mapped_out;             // per block
};

ChipDump chip_dump(const NandArray& nand);

// Ground truth for recoverability: last plaintext per lpa, the bytes as
// stored (ciphertext when encrypted) and every physical page that ever held
// them. Append-only during a run.
struct WriteHistory {
    std::vector<uint8_t> plaintext;
    std::vector<uint8_t> stored;
    std::vector<uint32_t> history;  // ppas, oldest first
};

struct DeletionRecord {
    uint32_t lpa;
    std::string technique;
    bool controller_denied;
};

struct ReferenceStore {
    std::map<uint32_t, WriteHistory> writes;
    std::vector<DeletionRecord> deletions;

    void note_write(uint32_t lpa, std::vector<uint8_t> plaintext,
                    std::vector<uint8_t> stored, uint32_t ppa);
    void note_relocation(uint32_t lpa, uint32_t to_ppa);
    void note_deletion(uint32_t lpa, std::string technique, bool controller_denied);
};

struct RecoveryEntry {
    uint32_t lpa = 0;
    double chip_recoverable = 0;   // best plaintext byte-match over history
    double stored_recoverable = 0; // same vs stored (ciphertext) bytes
    std::vector<uint32_t> locations;  // ppas where the best match was found
};

// Scans every physical page in the lpa's history; identity and bitwise-NOT
// readings are both tried; all-0xFF / all-0x00 pages count as blank.
RecoveryEntry recover_page(const ChipDump& dump, const ReferenceStore& ref, uint32_t lpa);

struct UnmappedPage {
    uint32_t block;
    uint32_t page;
    uint32_t nonblank_bytes;
};

// Every physical page outside the mapped set whose data area is neither
// all-0xFF nor all-0x00. mapped[ppa] marks currently mapped pages.
std::vector<UnmappedPage> scan_unmapped(const ChipDump& dump,
                                        const std::vector<bool>& mapped);

struct TechniqueResidualRow {
    std::string technique;
    uint32_t lpa_count = 0;
    double controller_recoverable = 0;  // mean over deletions
    double chip_recoverable_mean = 0;
    double stored_recoverable_mean = 0;
};

struct RecoveryReport {
    std::vector<TechniqueResidualRow> rows;  // sorted by technique
    std::vector<std::string> footnotes;
};

RecoveryReport residual_report(const ChipDump& dump, const ReferenceStore& ref);

// CSV: technique,lpa_count,controller_recoverable,chip_recoverable_mean
// followed by '#' footnote lines.
std::string report_csv(const RecoveryReport& report);

}  // namespace apsd
