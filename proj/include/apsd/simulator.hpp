#pragma once

#include <memory>
#include <span>

#include "apsd/config.hpp"
#include "apsd/delete_engine.hpp"
#include "apsd/forensics.hpp"
#include "apsd/ftl.hpp"

namespace apsd {

// Owns one device instance: NAND array, ledger, FTL, delete engine and the
// ground-truth reference store. Single-threaded command stream.
class Simulator {
public:
    explicit Simulator(const Config& config);

    WriteStatus write(uint32_t lpa, std::span<const uint8_t> data, bool encrypted);
    ReadResult read(uint32_t lpa) { return ftl_->host_read(lpa); }
    TrimStatus trim(uint32_t lpa) { return ftl_->trim_unmap(lpa); }
    DeleteResult secure_delete(uint32_t lpa, PrivacyLevel level,
                               std::optional<TechniqueId> override_technique = {});
    DeleteResult secure_delete_technique(uint32_t lpa, TechniqueId technique);
    uint32_t gc(uint32_t min_free) { return ftl_->garbage_collect(min_free); }

    ChipDump dump() const { return chip_dump(*nand_); }

    void set_context(int sensitivity, int trust, bool alert);
    PrivacyLevel auto_level() const;  // policy over current context + pressure

    const Config& config() const { return config_; }
    NandArray& nand() { return *nand_; }
    const NandArray& nand() const { return *nand_; }
    Ftl& ftl() { return *ftl_; }
    const Ftl& ftl() const { return *ftl_; }
    DeleteEngine& engine() { return *engine_; }
    MetricsLedger& metrics() { return *metrics_; }
    const MetricsLedger& metrics() const { return *metrics_; }
    ReferenceStore& reference() { return reference_; }
    const ReferenceStore& reference() const { return reference_; }

    std::vector<bool> mapped_ppas() const;

private:
    Config config_;
    std::unique_ptr<NandArray> nand_;
    std::unique_ptr<MetricsLedger> metrics_;
    std::unique_ptr<Ftl> ftl_;
    std::unique_ptr<DeleteEngine> engine_;
    ReferenceStore reference_;
    ContextVector context_;
};

}  // namespace apsd
