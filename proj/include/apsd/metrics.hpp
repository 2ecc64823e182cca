#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace apsd {

enum class OpKind : uint8_t {
    Read,
    Program,
    PartialProgram,
    Erase,
    Pulse,
    DownLevel,
    Meta,
};
constexpr int kOpKinds = 7;

const char* op_kind_name(OpKind k);

// Per-op latency (us) and energy (uJ). Additive constants, no queuing.
struct CostParams {
    double latency_us[kOpKinds] = {50, 600, 200, 3500, 400, 300, 10};
    double energy_uj[kOpKinds] = {30, 90, 40, 250, 60, 50, 1};

    double latency(OpKind k) const { return latency_us[static_cast<int>(k)]; }
    double energy(OpKind k) const { return energy_uj[static_cast<int>(k)]; }
};

struct TechniqueProfile {
    std::string technique;
    uint32_t deletions = 0;
    double latency_us = 0;
    double energy_uj = 0;
    uint32_t erases = 0;
    uint32_t partial_programs = 0;
    uint32_t programs = 0;
    uint32_t reads = 0;
};

struct LevelProfile {
    std::string level;  // "PL0".."PL3"
    uint32_t deletions = 0;
    double latency_us = 0;
    double energy_uj = 0;
    uint32_t erases = 0;
};

class MetricsLedger {
public:
    explicit MetricsLedger(CostParams params = {}) : params_(params) {}

    void record(OpKind kind);
    void record_block_erase(uint32_t block);  // Erase + per-block count
    void note_logical_write() { logical_pages_written_++; }
    void note_relocation() { relocations_++; }

    // Deletion attribution context; one deletion at a time.
    void begin_technique(const std::string& technique, const std::string& level);
    void end_technique();
    // Latency accumulated since begin_technique.
    double technique_latency_so_far() const;

    uint64_t op_count(OpKind kind) const { return counts_[static_cast<int>(kind)]; }
    double total_latency_us() const { return total_latency_us_; }
    double total_energy_uj() const { return total_energy_uj_; }
    uint64_t logical_pages_written() const { return logical_pages_written_; }
    uint64_t physical_pages_programmed() const { return physical_pages_programmed_; }
    uint64_t relocations() const { return relocations_; }
    const std::map<uint32_t, uint32_t>& block_erase_counts() const { return block_erases_; }

    // physical / logical; nullopt when nothing has been written.
    std::optional<double> write_amplification() const;

    static double block_erase_cost(const CostParams& p, uint32_t valid_pages);

    // Rows sorted by technique / level name.
    std::vector<TechniqueProfile> technique_profile() const;
    std::vector<LevelProfile> level_profile() const;

    // Raw op log, for recomputing totals independently.
    const std::vector<OpKind>& op_log() const { return op_log_; }
    const CostParams& params() const { return params_; }

private:
    CostParams params_;
    uint64_t counts_[kOpKinds] = {};
    double total_latency_us_ = 0;
    double total_energy_uj_ = 0;
    uint64_t logical_pages_written_ = 0;
    uint64_t physical_pages_programmed_ = 0;
    uint64_t relocations_ = 0;
    std::map<uint32_t, uint32_t> block_erases_;
    std::vector<OpKind> op_log_;

    bool in_technique_ = false;
    std::string active_technique_;
    std::string active_level_;
    std::map<std::string, TechniqueProfile> techniques_;
    std::map<std::string, LevelProfile> levels_;
};

}  // namespace apsd
