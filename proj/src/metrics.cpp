#include "apsd/metrics.hpp"

namespace apsd {

const char* op_kind_name(OpKind k) {
    switch (k) {
        case OpKind::Read: return "read";
        case OpKind::Program: return "program";
        case OpKind::PartialProgram: return "partial_program";
        case OpKind::Erase: return "erase";
        case OpKind::Pulse: return "pulse";
        case OpKind::DownLevel: return "downlevel";
        case OpKind::Meta: return "meta";
    }
    return "?";
}

void MetricsLedger::record(OpKind kind) {
    counts_[static_cast<int>(kind)]++;
    total_latency_us_ += params_.latency(kind);
    total_energy_uj_ += params_.energy(kind);
    op_log_.push_back(kind);
    if (kind == OpKind::Program) physical_pages_programmed_++;
    if (in_technique_) {
        auto& t = techniques_[active_technique_];
        t.technique = active_technique_;
        t.latency_us += params_.latency(kind);
        t.energy_uj += params_.energy(kind);
        switch (kind) {
            case OpKind::Erase: t.erases++; break;
            case OpKind::PartialProgram: t.partial_programs++; break;
            case OpKind::Program: t.programs++; break;
            case OpKind::Read: t.reads++; break;
            default: break;
        }
        if (!active_level_.empty()) {
            auto& l = levels_[active_level_];
            l.level = active_level_;
            l.latency_us += params_.latency(kind);
            l.energy_uj += params_.energy(kind);
            if (kind == OpKind::Erase) l.erases++;
        }
    }
}

void MetricsLedger::record_block_erase(uint32_t block) {
    record(OpKind::Erase);
    block_erases_[block]++;
}

void MetricsLedger::begin_technique(const std::string& technique,
                                    const std::string& level) {
    in_technique_ = true;
    active_technique_ = technique;
    active_level_ = level;
    auto& t = techniques_[technique];
    t.technique = technique;
    t.deletions++;
    if (!level.empty()) {
        auto& l = levels_[level];
        l.level = level;
        l.deletions++;
    }
}

void MetricsLedger::end_technique() {
    in_technique_ = false;
    active_technique_.clear();
    active_level_.clear();
}

double MetricsLedger::technique_latency_so_far() const {
    if (!in_technique_) return 0;
    auto it = techniques_.find(active_technique_);
    return it == techniques_.end() ? 0 : it->second.latency_us;
}

std::optional<double> MetricsLedger::write_amplification() const {
    if (logical_pages_written_ == 0) return std::nullopt;
    return static_cast<double>(physical_pages_programmed_) /
           static_cast<double>(logical_pages_written_);
}

double MetricsLedger::block_erase_cost(const CostParams& p, uint32_t valid_pages) {
    return p.latency(OpKind::Erase) +
           valid_pages * (p.latency(OpKind::Read) + p.latency(OpKind::Program));
}

std::vector<TechniqueProfile> MetricsLedger::technique_profile() const {
    std::vector<TechniqueProfile> rows;
    for (const auto& [_, t] : techniques_) rows.push_back(t);
    return rows;  // std::map keeps them name-sorted
}

std::vector<LevelProfile> MetricsLedger::level_profile() const {
    std::vector<LevelProfile> rows;
    for (const auto& [_, l] : levels_) rows.push_back(l);
    return rows;
}

}  // namespace apsd
