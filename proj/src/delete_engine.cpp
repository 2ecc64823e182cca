#include "apsd/delete_engine.hpp"

#include <cassert>

#include "apsd/codec.hpp"

namespace apsd {

const char* technique_name(TechniqueId t) {
    switch (t) {
        case TechniqueId::Unmap: return "unmap";
        case TechniqueId::CryptoErase: return "crypto";
        case TechniqueId::BlockErase: return "erase";
        case TechniqueId::Scrub: return "scrub";
        case TechniqueId::Overwrite: return "overwrite";
        case TechniqueId::DeletionPulse: return "pulse";
        case TechniqueId::DownLevel: return "downlevel";
        case TechniqueId::EccModulation: return "eccmod";
        case TechniqueId::FlagLock: return "flaglock";
        case TechniqueId::MapOut: return "mapout";
    }
    return "?";
}

std::optional<TechniqueId> parse_technique(const std::string& s) {
    for (TechniqueId t : {TechniqueId::Unmap, TechniqueId::CryptoErase,
                          TechniqueId::BlockErase, TechniqueId::Scrub,
                          TechniqueId::Overwrite, TechniqueId::DeletionPulse,
                          TechniqueId::DownLevel, TechniqueId::EccModulation,
                          TechniqueId::FlagLock, TechniqueId::MapOut}) {
        if (s == technique_name(t)) return t;
    }
    return std::nullopt;
}

const char* delete_status_name(DeleteStatus s) {
    switch (s) {
        case DeleteStatus::Ok: return "Ok";
        case DeleteStatus::Unmapped: return "Unmapped";
        case DeleteStatus::NotEncrypted: return "NotEncrypted";
        case DeleteStatus::InvalidOverride: return "InvalidOverride";
        case DeleteStatus::WornOut: return "WornOut";
        case DeleteStatus::LimitExceeded: return "LimitExceeded";
    }
    return "?";
}

TechniqueId default_technique(PrivacyLevel level) {
    switch (level) {
        case PrivacyLevel::PL0: return TechniqueId::BlockErase;
        case PrivacyLevel::PL1: return TechniqueId::Scrub;
        case PrivacyLevel::PL2: return TechniqueId::EccModulation;
        case PrivacyLevel::PL3: return TechniqueId::MapOut;
    }
    return TechniqueId::BlockErase;
}

bool technique_in_level(PrivacyLevel level, TechniqueId t) {
    switch (level) {
        case PrivacyLevel::PL0:
            return t == TechniqueId::BlockErase;
        case PrivacyLevel::PL1:
            return t == TechniqueId::Scrub || t == TechniqueId::Overwrite ||
                   t == TechniqueId::DeletionPulse || t == TechniqueId::DownLevel;
        case PrivacyLevel::PL2:
            return t == TechniqueId::EccModulation || t == TechniqueId::FlagLock;
        case PrivacyLevel::PL3:
            return t == TechniqueId::MapOut;
    }
    return false;
}

double DeleteEngine::expected_residual(TechniqueId t) {
    switch (t) {
        case TechniqueId::Unmap:
        case TechniqueId::CryptoErase:  // ciphertext persists at chip level
        case TechniqueId::EccModulation:
        case TechniqueId::FlagLock:
        case TechniqueId::MapOut:
            return 1.0;
        default:
            return 0.0;
    }
}

DeleteResult DeleteEngine::secure_delete(uint32_t lpa, PrivacyLevel level,
                                         std::optional<TechniqueId> override_technique) {
    TechniqueId technique = default_technique(level);
    if (override_technique) {
        if (!technique_in_level(level, *override_technique))
            return {DeleteStatus::InvalidOverride, {}};
        technique = *override_technique;
    }
    return run(lpa, technique, level_name(level));
}

DeleteResult DeleteEngine::secure_delete_technique(uint32_t lpa, TechniqueId technique) {
    return run(lpa, technique, "");
}

VerificationReport DeleteEngine::verify_deletion(uint32_t lpa, TechniqueId technique) {
    VerificationReport rep;
    ReadResult r = ftl_.host_read(lpa);
    rep.controller_denied = r.status != ReadStatus::Ok;
    rep.denial_kind = r.status;
    rep.chip_residual_expected = expected_residual(technique);
    return rep;
}

DeleteResult DeleteEngine::run(uint32_t lpa, TechniqueId technique,
                               const std::string& level_tag) {
    auto mapped = ftl_.mapping(lpa);
    if (!mapped) return {DeleteStatus::Unmapped, {}};
    Ppa ppa = *mapped;

    MetricsLedger& metrics = ftl_.metrics();
    metrics.begin_technique(technique_name(technique), level_tag);
    double latency_before = metrics.total_latency_us();

    DeleteResult result;
    result.outcome.technique = technique;
    DeleteStatus st = DeleteStatus::Ok;
    bool unmap_after_verify = true;

    switch (technique) {
        case TechniqueId::Unmap:
            ftl_.trim_unmap(lpa);
            unmap_after_verify = false;
            break;
        case TechniqueId::BlockErase:
            st = technique_block_erase(ppa, result.outcome);
            unmap_after_verify = false;
            break;
        case TechniqueId::Scrub:
        case TechniqueId::Overwrite:
        case TechniqueId::DeletionPulse:
        case TechniqueId::DownLevel:
            st = technique_page_destroy(ppa, technique, result.outcome);
            break;
        case TechniqueId::EccModulation:
        case TechniqueId::FlagLock:
            st = technique_parity(ppa, technique, result.outcome);
            break;
        case TechniqueId::CryptoErase:
            st = technique_crypto_erase(ppa, result.outcome);
            break;
        case TechniqueId::MapOut:
            st = technique_map_out(lpa, ppa, result.outcome);
            break;
    }

    if (st == DeleteStatus::Ok) {
        result.outcome.verification = verify_deletion(lpa, technique);
        if (unmap_after_verify) ftl_.trim_unmap(lpa);
    }
    result.status = st;
    result.outcome.latency_us = metrics.total_latency_us() - latency_before;
    metrics.end_technique();
    return result;
}

DeleteStatus DeleteEngine::technique_block_erase(Ppa ppa, DeleteOutcome& out) {
    uint32_t ppb = ftl_.nand().geometry().pages_per_block;
    uint32_t block = ppa / ppb;
    out.relocations = ftl_.relocate_block(block, {ppa});
    uint32_t lpa = ftl_.lpa_of(ppa);
    if (lpa != kNoAddr) ftl_.trim_unmap(lpa);
    NandStatus st = ftl_.erase_block(block);
    if (st == NandStatus::WornOut) return DeleteStatus::WornOut;
    out.pages_touched = ppb;
    return DeleteStatus::Ok;
}

DeleteStatus DeleteEngine::technique_page_destroy(Ppa ppa, TechniqueId variant,
                                                  DeleteOutcome& out) {
    NandArray& nand = ftl_.nand();
    const Geometry& g = nand.geometry();
    MetricsLedger& metrics = ftl_.metrics();
    uint32_t b = ppa / g.pages_per_block, p = ppa % g.pages_per_block;
    std::vector<uint8_t> zeros(g.page_data_bytes, 0x00);

    auto scrub_pass = [&]() -> NandStatus {
        NandStatus st = nand.partial_program(b, p, 0, zeros);
        if (st != NandStatus::Ok) return st;
        metrics.record(OpKind::PartialProgram);
        // Verify read: the data area must now be all zero.
        metrics.record(OpKind::Read);
        const PageState& page = nand.read_raw(b, p);
        for (uint8_t byte : page.data)
            if (byte != 0x00) return NandStatus::LimitExceeded;  // unreachable
        return NandStatus::Ok;
    };

    NandStatus st = NandStatus::Ok;
    switch (variant) {
        case TechniqueId::Scrub:
            st = scrub_pass();
            break;
        case TechniqueId::Overwrite: {
            st = scrub_pass();
            if (st != NandStatus::Ok) break;
            // Second pass over the full data+spare extent, then re-verify.
            std::vector<uint8_t> full(g.page_data_bytes + g.page_spare_bytes, 0x00);
            st = nand.partial_program(b, p, 0, full);
            if (st != NandStatus::Ok) break;
            metrics.record(OpKind::PartialProgram);
            metrics.record(OpKind::Read);
            break;
        }
        case TechniqueId::DeletionPulse:
            st = nand.deletion_pulse(b, p);
            if (st == NandStatus::Ok) metrics.record(OpKind::Pulse);
            break;
        case TechniqueId::DownLevel:
            st = nand.down_level(b, p);
            if (st != NandStatus::Ok) break;
            metrics.record(OpKind::DownLevel);
            metrics.record(OpKind::Read);  // zero-verify, as in scrub
            break;
        default:
            break;
    }
    if (st == NandStatus::LimitExceeded) return DeleteStatus::LimitExceeded;
    assert(st == NandStatus::Ok);
    out.pages_touched = 1;
    return DeleteStatus::Ok;
}

DeleteStatus DeleteEngine::technique_parity(Ppa ppa, TechniqueId variant,
                                            DeleteOutcome& out) {
    NandArray& nand = ftl_.nand();
    const Geometry& g = nand.geometry();
    uint32_t b = ppa / g.pages_per_block, p = ppa % g.pages_per_block;
    SpareMask mask = variant == TechniqueId::EccModulation
                         ? make_poison_mask(g)
                         : make_flag_lock_mask(g);
    NandStatus st = nand.partial_program(b, p, g.page_data_bytes + mask.offset,
                                         mask.bytes);
    if (st == NandStatus::LimitExceeded) return DeleteStatus::LimitExceeded;
    assert(st == NandStatus::Ok);
    ftl_.metrics().record(OpKind::PartialProgram);
    out.pages_touched = 1;
    return DeleteStatus::Ok;
}

DeleteStatus DeleteEngine::technique_crypto_erase(Ppa ppa, DeleteOutcome& out) {
    if (!ftl_.has_live_key(ppa)) return DeleteStatus::NotEncrypted;
    ftl_.destroy_key(ppa);
    ftl_.metrics().record(OpKind::Meta);
    out.pages_touched = 0;
    return DeleteStatus::Ok;
}

DeleteStatus DeleteEngine::technique_map_out(uint32_t lpa, Ppa ppa, DeleteOutcome& out) {
    uint32_t ppb = ftl_.nand().geometry().pages_per_block;
    uint32_t block = ppa / ppb;
    (void)lpa;
    out.relocations = ftl_.relocate_block(block, {ppa});
    MapOutStatus st = ftl_.map_out_block(block, {ppa});
    assert(st == MapOutStatus::Ok);
    (void)st;
    return DeleteStatus::Ok;
}

}  // namespace apsd
