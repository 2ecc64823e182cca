#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "apsd/ftl.hpp"
#include "apsd/policy.hpp"

namespace apsd {

enum class TechniqueId {
    Unmap,
    CryptoErase,
    BlockErase,
    Scrub,
    Overwrite,
    DeletionPulse,
    DownLevel,
    EccModulation,
    FlagLock,
    MapOut,
};

// Stable strings used in traces, CSVs and CLI flags.
const char* technique_name(TechniqueId t);
std::optional<TechniqueId> parse_technique(const std::string& s);

// Default level -> technique table and the per-level override families.
TechniqueId default_technique(PrivacyLevel level);
bool technique_in_level(PrivacyLevel level, TechniqueId t);

struct VerificationReport {
    bool controller_denied = false;
    ReadStatus denial_kind = ReadStatus::Unmapped;
    double chip_residual_expected = 0;  // raw-byte persistence fraction
};

struct DeleteOutcome {
    TechniqueId technique = TechniqueId::Unmap;
    uint32_t pages_touched = 0;
    uint32_t relocations = 0;
    double latency_us = 0;  // ledger delta attributed to this deletion
    VerificationReport verification;
};

enum class DeleteStatus { Ok, Unmapped, NotEncrypted, InvalidOverride, WornOut, LimitExceeded };
const char* delete_status_name(DeleteStatus s);

struct DeleteResult {
    DeleteStatus status = DeleteStatus::Ok;
    DeleteOutcome outcome;
};

// Privacy-level dispatcher: picks the technique for a level, executes it,
// verifies read denial against the still-mapped lpa, then unmaps.
class DeleteEngine {
public:
    explicit DeleteEngine(Ftl& ftl) : ftl_(ftl) {}

    DeleteResult secure_delete(uint32_t lpa, PrivacyLevel level,
                               std::optional<TechniqueId> override_technique = {});
    // Direct technique selection (trace "D lpa scrub" etc.); also reaches
    // Unmap and CryptoErase, which have no level of their own.
    DeleteResult secure_delete_technique(uint32_t lpa, TechniqueId technique);

    VerificationReport verify_deletion(uint32_t lpa, TechniqueId technique);

    static double expected_residual(TechniqueId t);

private:
    DeleteResult run(uint32_t lpa, TechniqueId technique, const std::string& level_tag);

    DeleteStatus technique_block_erase(Ppa ppa, DeleteOutcome& out);
    DeleteStatus technique_page_destroy(Ppa ppa, TechniqueId variant, DeleteOutcome& out);
    DeleteStatus technique_parity(Ppa ppa, TechniqueId variant, DeleteOutcome& out);
    DeleteStatus technique_crypto_erase(Ppa ppa, DeleteOutcome& out);
    DeleteStatus technique_map_out(uint32_t lpa, Ppa ppa, DeleteOutcome& out);

    Ftl& ftl_;
};

}  // namespace apsd
