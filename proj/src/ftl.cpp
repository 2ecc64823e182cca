#include "apsd/ftl.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "apsd/codec.hpp"

namespace apsd {

const char* read_status_name(ReadStatus s) {
    switch (s) {
        case ReadStatus::Ok: return "Ok";
        case ReadStatus::Unmapped: return "Unmapped";
        case ReadStatus::Locked: return "Locked";
        case ReadStatus::Poisoned: return "Poisoned";
        case ReadStatus::Uncorrectable: return "Uncorrectable";
        case ReadStatus::MappedOut: return "MappedOut";
    }
    return "?";
}

Ftl::Ftl(NandArray& nand, MetricsLedger& metrics, double op_ratio)
    : nand_(nand), metrics_(metrics), op_ratio_(op_ratio),
      ppb_(nand.geometry().pages_per_block) {
    uint32_t total = nand_.geometry().total_pages();
    recompute_capacity();
    forward_.assign(logical_capacity_, kNoAddr);
    reverse_.assign(total, kNoAddr);
    valid_.assign(total, false);
    valid_count_.assign(nand_.geometry().blocks, 0);
    cursor_.assign(nand_.geometry().blocks, 0);
    for (uint32_t b = 0; b < nand_.geometry().blocks; ++b) free_blocks_.insert(b);
}

void Ftl::recompute_capacity() {
    uint32_t usable = (nand_.geometry().blocks - mapped_out_blocks_) * ppb_;
    logical_capacity_ =
        static_cast<uint32_t>(std::floor(usable * (1.0 - op_ratio_)));
}

uint32_t Ftl::free_pages() const {
    uint32_t n = static_cast<uint32_t>(free_blocks_.size()) * ppb_;
    if (open_block_) n += ppb_ - cursor_[*open_block_];
    return n;
}

std::optional<uint32_t> Ftl::pick_free_block() const {
    std::optional<uint32_t> best;
    for (uint32_t b : free_blocks_) {
        if (!best || nand_.block(b).erase_count < nand_.block(*best).erase_count)
            best = b;
    }
    return best;
}

Ppa Ftl::allocate_page() {
    if (open_block_ && cursor_[*open_block_] >= ppb_) open_block_.reset();
    if (!open_block_) {
        auto b = pick_free_block();
        if (!b) return kNoAddr;
        free_blocks_.erase(*b);
        open_block_ = *b;
    }
    uint32_t b = *open_block_;
    Ppa ppa = b * ppb_ + cursor_[b];
    cursor_[b]++;
    return ppa;
}

WriteStatus Ftl::host_write(uint32_t lpa, std::span<const uint8_t> data,
                            bool encrypted) {
    if (lpa >= logical_capacity_) return WriteStatus::BadLpa;
    assert(data.size() == nand_.geometry().page_data_bytes);
    if (free_pages() < ppb_) garbage_collect(ppb_);
    Ppa ppa = allocate_page();
    if (ppa == kNoAddr) {
        garbage_collect(1);
        ppa = allocate_page();
        if (ppa == kNoAddr) return WriteStatus::DeviceFull;
    }

    std::vector<uint8_t> stored(data.begin(), data.end());
    if (encrypted) {
        PageKey key{};
        do {
            uint64_t a = mix64(nand_.seed() ^ 0xC0DEC0DEULL, key_counter_ * 2);
            uint64_t b = mix64(nand_.seed() ^ 0xC0DEC0DEULL, key_counter_ * 2 + 1);
            key_counter_++;
            for (int i = 0; i < 8; ++i) {
                key[i] = static_cast<uint8_t>(a >> (8 * i));
                key[8 + i] = static_cast<uint8_t>(b >> (8 * i));
            }
        } while (key == PageKey{});  // all-zero marks a revoked key
        apply_keystream(key, stored.data(), stored.size());
        keys_[ppa] = key;
        encrypted_.insert(ppa);
    }
    std::vector<uint8_t> sp = encode_spare(stored, nand_.geometry());
    NandStatus st = nand_.program_page(ppa / ppb_, ppa % ppb_, stored, sp);
    assert(st == NandStatus::Ok);
    (void)st;
    metrics_.record(OpKind::Program);
    metrics_.record(OpKind::Meta);
    metrics_.note_logical_write();

    if (forward_[lpa] != kNoAddr) {
        invalidate(forward_[lpa]);
    } else {
        mapped_count_++;
    }
    forward_[lpa] = ppa;
    reverse_[ppa] = lpa;
    valid_[ppa] = true;
    valid_count_[ppa / ppb_]++;
    return WriteStatus::Ok;
}

ReadResult Ftl::host_read(uint32_t lpa) {
    if (lpa >= forward_.size() || forward_[lpa] == kNoAddr)
        return {ReadStatus::Unmapped, {}};
    Ppa ppa = forward_[lpa];
    uint32_t b = ppa / ppb_, p = ppa % ppb_;
    if (nand_.block(b).mapped_out) return {ReadStatus::MappedOut, {}};
    metrics_.record(OpKind::Read);
    const PageState& page = nand_.read_raw(b, p);
    DecodeOutcome outcome = decode_page(page.data, page.spare, nand_.geometry());
    switch (outcome.verdict) {
        case Verdict::Locked: return {ReadStatus::Locked, {}};
        case Verdict::Poisoned: return {ReadStatus::Poisoned, {}};
        case Verdict::Uncorrectable: return {ReadStatus::Uncorrectable, {}};
        case Verdict::Ok: break;
    }
    if (encrypted_.count(ppa)) {
        auto it = keys_.find(ppa);
        if (it == keys_.end()) return {ReadStatus::Uncorrectable, {}};
        apply_keystream(it->second, outcome.data.data(), outcome.data.size());
    }
    return {ReadStatus::Ok, std::move(outcome.data)};
}

TrimStatus Ftl::trim_unmap(uint32_t lpa) {
    if (lpa >= forward_.size() || forward_[lpa] == kNoAddr)
        return TrimStatus::Unmapped;
    invalidate(forward_[lpa]);
    forward_[lpa] = kNoAddr;
    mapped_count_--;
    metrics_.record(OpKind::Meta);
    return TrimStatus::Ok;
}

void Ftl::invalidate(Ppa ppa) {
    if (!valid_[ppa]) return;
    valid_[ppa] = false;
    valid_count_[ppa / ppb_]--;
    reverse_[ppa] = kNoAddr;
}

std::optional<uint32_t> Ftl::pick_victim() const {
    std::optional<uint32_t> best;
    for (uint32_t b = 0; b < nand_.geometry().blocks; ++b) {
        const BlockState& blk = nand_.block(b);
        if (blk.mapped_out) continue;
        if (blk.erase_count >= nand_.geometry().erase_limit) continue;
        if (free_blocks_.count(b)) continue;
        if (open_block_ && *open_block_ == b) continue;
        if (!best) {
            best = b;
            continue;
        }
        const BlockState& cur = nand_.block(*best);
        auto key = [&](uint32_t id, const BlockState& s) {
            return std::tuple(valid_count_[id], s.erase_count, id);
        };
        if (key(b, blk) < key(*best, cur)) best = b;
    }
    return best;
}

uint32_t Ftl::garbage_collect(uint32_t min_free_pages) {
    uint32_t relocated = 0;
    while (free_pages() < min_free_pages) {
        auto victim = pick_victim();
        if (!victim) break;
        if (valid_count_[*victim] >= ppb_) break;  // nothing to gain
        relocated += relocate_block(*victim, {});
        if (erase_block(*victim) != NandStatus::Ok) break;
    }
    return relocated;
}

uint32_t Ftl::relocate_block(uint32_t block, const std::set<Ppa>& keep_invalid) {
    detach_from_allocation(block);
    uint32_t moved = 0;
    for (uint32_t p = 0; p < ppb_; ++p) {
        Ppa ppa = block * ppb_ + p;
        if (!valid_[ppa] || keep_invalid.count(ppa)) continue;
        relocate_page(ppa);
        moved++;
    }
    return moved;
}

void Ftl::detach_from_allocation(uint32_t block) {
    free_blocks_.erase(block);
    if (open_block_ && *open_block_ == block) open_block_.reset();
}

void Ftl::relocate_page(Ppa from) {
    uint32_t lpa = reverse_[from];
    assert(lpa != kNoAddr);
    const PageState& src = nand_.read_raw(from / ppb_, from % ppb_);
    metrics_.record(OpKind::Read);
    Ppa to = allocate_page();
    assert(to != kNoAddr);
    NandStatus st = nand_.program_page(to / ppb_, to % ppb_, src.data, src.spare);
    assert(st == NandStatus::Ok);
    (void)st;
    metrics_.record(OpKind::Program);
    metrics_.note_relocation();

    invalidate(from);
    forward_[lpa] = to;
    reverse_[to] = lpa;
    valid_[to] = true;
    valid_count_[to / ppb_]++;

    if (encrypted_.count(from)) {
        encrypted_.erase(from);
        encrypted_.insert(to);
        auto it = keys_.find(from);
        if (it != keys_.end()) {
            keys_[to] = it->second;
            keys_.erase(it);
        }
    }
    if (on_relocate) on_relocate(lpa, from, to);
}

NandStatus Ftl::erase_block(uint32_t block) {
    NandStatus st = nand_.erase_block(block);
    if (st != NandStatus::Ok) return st;
    metrics_.record_block_erase(block);
    for (uint32_t p = 0; p < ppb_; ++p) {
        Ppa ppa = block * ppb_ + p;
        if (valid_[ppa]) {
            // Stale mapping into an erased block; drop it.
            if (reverse_[ppa] != kNoAddr) forward_[reverse_[ppa]] = kNoAddr;
            invalidate(ppa);
        }
        reverse_[ppa] = kNoAddr;
        keys_.erase(ppa);
        encrypted_.erase(ppa);
    }
    valid_count_[block] = 0;
    cursor_[block] = 0;
    detach_from_allocation(block);
    free_blocks_.insert(block);
    return NandStatus::Ok;
}

MapOutStatus Ftl::map_out_block(uint32_t block, const std::set<Ppa>& keep_invalid) {
    if (nand_.block(block).mapped_out) return MapOutStatus::AlreadyMappedOut;
    relocate_block(block, keep_invalid);
    nand_.set_mapped_out(block, true);
    mapped_out_blocks_++;
    metrics_.record(OpKind::Meta);
    recompute_capacity();
    return MapOutStatus::Ok;
}

bool Ftl::has_live_key(Ppa ppa) const { return keys_.count(ppa) > 0; }

bool Ftl::destroy_key(Ppa ppa) {
    auto it = keys_.find(ppa);
    if (it == keys_.end()) return false;
    keys_.erase(it);
    return true;
}

bool Ftl::is_encrypted(Ppa ppa) const { return encrypted_.count(ppa) > 0; }

std::optional<Ppa> Ftl::mapping(uint32_t lpa) const {
    if (lpa >= forward_.size() || forward_[lpa] == kNoAddr) return std::nullopt;
    return forward_[lpa];
}

uint32_t Ftl::lpa_of(Ppa ppa) const { return reverse_[ppa]; }
bool Ftl::is_valid(Ppa ppa) const { return valid_[ppa]; }

std::string Ftl::audit() const {
    uint32_t mapped = 0;
    for (uint32_t lpa = 0; lpa < forward_.size(); ++lpa) {
        Ppa ppa = forward_[lpa];
        if (ppa == kNoAddr) continue;
        mapped++;
        if (!valid_[ppa]) return "mapped lpa points at invalid page";
        if (reverse_[ppa] != lpa) return "forward/reverse mismatch";
    }
    if (mapped != mapped_count_) return "mapped_count out of sync";
    std::vector<uint32_t> counts(nand_.geometry().blocks, 0);
    for (Ppa ppa = 0; ppa < valid_.size(); ++ppa) {
        if (!valid_[ppa]) {
            if (reverse_[ppa] != kNoAddr) return "invalid page has reverse entry";
            continue;
        }
        if (reverse_[ppa] == kNoAddr) return "valid page without reverse entry";
        if (forward_[reverse_[ppa]] != ppa) return "reverse/forward mismatch";
        counts[ppa / ppb_]++;
    }
    for (uint32_t b = 0; b < counts.size(); ++b)
        if (counts[b] != valid_count_[b]) return "valid_count out of sync";
    for (uint32_t b : free_blocks_)
        if (nand_.block(b).mapped_out) return "mapped-out block in free pool";
    if (open_block_ && nand_.block(*open_block_).mapped_out)
        return "mapped-out open block";
    return "";
}

std::vector<std::pair<uint32_t, Ppa>> Ftl::mapping_entries() const {
    std::vector<std::pair<uint32_t, Ppa>> out;
    for (uint32_t lpa = 0; lpa < forward_.size(); ++lpa)
        if (forward_[lpa] != kNoAddr) out.emplace_back(lpa, forward_[lpa]);
    return out;
}

std::vector<std::pair<Ppa, PageKey>> Ftl::keystore_entries() const {
    std::vector<std::pair<Ppa, PageKey>> out;
    for (Ppa ppa : encrypted_) {
        auto it = keys_.find(ppa);
        out.emplace_back(ppa, it == keys_.end() ? PageKey{} : it->second);
    }
    return out;
}

void Ftl::restore(const std::vector<std::pair<uint32_t, Ppa>>& mapping,
                  const std::vector<std::pair<Ppa, PageKey>>& keys) {
    uint32_t blocks = nand_.geometry().blocks;
    mapped_out_blocks_ = 0;
    for (uint32_t b = 0; b < blocks; ++b)
        if (nand_.block(b).mapped_out) mapped_out_blocks_++;
    recompute_capacity();

    std::fill(forward_.begin(), forward_.end(), kNoAddr);
    std::fill(reverse_.begin(), reverse_.end(), kNoAddr);
    std::fill(valid_.begin(), valid_.end(), false);
    std::fill(valid_count_.begin(), valid_count_.end(), 0);
    mapped_count_ = 0;
    for (auto [lpa, ppa] : mapping) {
        if (lpa >= forward_.size()) continue;
        forward_[lpa] = ppa;
        reverse_[ppa] = lpa;
        valid_[ppa] = true;
        valid_count_[ppa / ppb_]++;
        mapped_count_++;
    }

    free_blocks_.clear();
    open_block_.reset();
    for (uint32_t b = 0; b < blocks; ++b) {
        uint32_t c = 0;
        while (c < ppb_ && nand_.block(b).pages[c].full_programs > 0) c++;
        cursor_[b] = c;
        if (nand_.block(b).mapped_out) continue;
        if (c == 0)
            free_blocks_.insert(b);
        else if (c < ppb_)
            open_block_ = b;
    }

    keys_.clear();
    encrypted_.clear();
    for (const auto& [ppa, key] : keys) {
        encrypted_.insert(ppa);
        if (key != PageKey{}) keys_[ppa] = key;
    }
    key_counter_ = keys.size();
}

}  // namespace apsd
