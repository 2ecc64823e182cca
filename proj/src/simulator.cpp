#include "apsd/simulator.hpp"

namespace apsd {

Simulator::Simulator(const Config& config) : config_(config) {
    nand_ = std::make_unique<NandArray>(config_.geometry, config_.seed);
    metrics_ = std::make_unique<MetricsLedger>(config_.cost);
    ftl_ = std::make_unique<Ftl>(*nand_, *metrics_, config_.op_ratio);
    engine_ = std::make_unique<DeleteEngine>(*ftl_);
    ftl_->on_relocate = [this](uint32_t lpa, Ppa, Ppa to) {
        reference_.note_relocation(lpa, to);
    };
}

WriteStatus Simulator::write(uint32_t lpa, std::span<const uint8_t> data,
                             bool encrypted) {
    WriteStatus st = ftl_->host_write(lpa, data, encrypted);
    if (st == WriteStatus::Ok) {
        Ppa ppa = *ftl_->mapping(lpa);
        const PageState& page = nand_->read_raw(
            ppa / config_.geometry.pages_per_block,
            ppa % config_.geometry.pages_per_block);
        reference_.note_write(lpa, {data.begin(), data.end()}, page.data, ppa);
    }
    return st;
}

DeleteResult Simulator::secure_delete(uint32_t lpa, PrivacyLevel level,
                                      std::optional<TechniqueId> override_technique) {
    DeleteResult r = engine_->secure_delete(lpa, level, override_technique);
    if (r.status == DeleteStatus::Ok)
        reference_.note_deletion(lpa, technique_name(r.outcome.technique),
                                 r.outcome.verification.controller_denied);
    return r;
}

DeleteResult Simulator::secure_delete_technique(uint32_t lpa, TechniqueId technique) {
    DeleteResult r = engine_->secure_delete_technique(lpa, technique);
    if (r.status == DeleteStatus::Ok)
        reference_.note_deletion(lpa, technique_name(r.outcome.technique),
                                 r.outcome.verification.controller_denied);
    return r;
}

void Simulator::set_context(int sensitivity, int trust, bool alert) {
    context_.sensitivity = sensitivity;
    context_.network_trust = trust;
    context_.threat_alert = alert;
}

PrivacyLevel Simulator::auto_level() const {
    ContextVector ctx = context_;
    uint32_t cap = ftl_->logical_capacity();
    ctx.workload_pressure =
        cap == 0 ? 1.0 : static_cast<double>(ftl_->mapped_count()) / cap;
    return select_level(ctx, config_.policy);
}

std::vector<bool> Simulator::mapped_ppas() const {
    std::vector<bool> mapped(config_.geometry.total_pages(), false);
    for (auto [lpa, ppa] : ftl_->mapping_entries()) mapped[ppa] = true;
    return mapped;
}

}  // namespace apsd
