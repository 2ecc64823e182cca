#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "apsd/metrics.hpp"
#include "apsd/nand.hpp"
#include "apsd/rng.hpp"

namespace apsd {

using Ppa = uint32_t;  // block * pages_per_block + page
constexpr uint32_t kNoAddr = std::numeric_limits<uint32_t>::max();

enum class ReadStatus { Ok, Unmapped, Locked, Poisoned, Uncorrectable, MappedOut };
const char* read_status_name(ReadStatus s);

struct ReadResult {
    ReadStatus status;
    std::vector<uint8_t> data;  // plaintext, present only for Ok
};

enum class WriteStatus { Ok, DeviceFull, BadLpa };
enum class TrimStatus { Ok, Unmapped };
enum class MapOutStatus { Ok, AlreadyMappedOut };

// Page-mapped FTL with out-of-place writes, greedy min-valid GC,
// over-provisioning, a map-out (bad block) table and a per-page key store.
class Ftl {
public:
    Ftl(NandArray& nand, MetricsLedger& metrics, double op_ratio);

    WriteStatus host_write(uint32_t lpa, std::span<const uint8_t> data, bool encrypted);
    ReadResult host_read(uint32_t lpa);
    TrimStatus trim_unmap(uint32_t lpa);
    uint32_t garbage_collect(uint32_t min_free_pages);  // returns relocated pages
    // Relocates valid pages first, except those listed in keep_invalid
    // (deletion targets); the block then refuses every controller path.
    MapOutStatus map_out_block(uint32_t block, const std::set<Ppa>& keep_invalid = {});

    // Crypto-erase support.
    bool has_live_key(Ppa ppa) const;
    bool destroy_key(Ppa ppa);  // false when no live key
    bool is_encrypted(Ppa ppa) const;

    // Used by the delete engine: relocate valid pages of a block (minus the
    // targets) through the write path and detach it from allocation.
    uint32_t relocate_block(uint32_t block, const std::set<Ppa>& keep_invalid);
    // Controller-path erase: clears per-page bookkeeping and returns the
    // block to the free pool.
    NandStatus erase_block(uint32_t block);
    void invalidate(Ppa ppa);  // drop validity + reverse map, bytes untouched

    std::optional<Ppa> mapping(uint32_t lpa) const;
    uint32_t lpa_of(Ppa ppa) const;  // kNoAddr when invalid
    bool is_valid(Ppa ppa) const;
    uint32_t logical_capacity() const { return logical_capacity_; }
    uint32_t mapped_count() const { return mapped_count_; }
    uint32_t free_pages() const;
    double op_ratio() const { return op_ratio_; }
    NandArray& nand() { return nand_; }
    MetricsLedger& metrics() { return metrics_; }

    // Full-scan consistency audit; empty string when clean.
    std::string audit() const;

    // Snapshot access: sorted views plus state reconstruction.
    std::vector<std::pair<uint32_t, Ppa>> mapping_entries() const;
    // (ppa, key); revoked pages carry the all-zero key.
    std::vector<std::pair<Ppa, PageKey>> keystore_entries() const;
    void restore(const std::vector<std::pair<uint32_t, Ppa>>& mapping,
                 const std::vector<std::pair<Ppa, PageKey>>& keys);

    // Invoked for every GC/map-out/erase relocation.
    std::function<void(uint32_t lpa, Ppa from, Ppa to)> on_relocate;

private:
    Ppa allocate_page();  // kNoAddr when no free page
    std::optional<uint32_t> pick_free_block() const;
    std::optional<uint32_t> pick_victim() const;
    void detach_from_allocation(uint32_t block);
    void relocate_page(Ppa from);
    void recompute_capacity();

    NandArray& nand_;
    MetricsLedger& metrics_;
    double op_ratio_;
    uint32_t ppb_;

    std::vector<Ppa> forward_;        // lpa -> ppa
    std::vector<uint32_t> reverse_;   // ppa -> lpa
    std::vector<bool> valid_;
    std::vector<uint32_t> valid_count_;  // per block
    std::vector<uint32_t> cursor_;       // next free page per block
    std::set<uint32_t> free_blocks_;
    std::optional<uint32_t> open_block_;
    uint32_t mapped_out_blocks_ = 0;
    uint32_t logical_capacity_ = 0;
    uint32_t mapped_count_ = 0;

    std::map<Ppa, PageKey> keys_;       // live keys
    std::set<Ppa> encrypted_;           // pages written encrypted (key may be gone)
    uint64_t key_counter_ = 0;
};

}  // namespace apsd
