// End-to-end acceptance checks. Each numbered check prints exactly one
// PASS/FAIL line; the process exits nonzero when any check fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "apsd/codec.hpp"
#include "apsd/forensics.hpp"
#include "apsd/harness.hpp"
#include "apsd/simulator.hpp"
#include "apsd/snapshot.hpp"

using namespace apsd;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool ok, const std::string& detail) {
    if (!ok) failures++;
    std::printf("%s  [%2d] %s%s%s\n", ok ? "PASS" : "FAIL", idx, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
}

Config default_config(uint64_t seed = 2024) {
    Config c;
    c.seed = seed;
    return c;  // stock geometry: 256 blocks x 64 pages x 2048+64 bytes
}

std::vector<uint8_t> page(const Geometry& g, uint64_t seed) {
    return random_page(seed, g.page_data_bytes);
}

struct SingleDelete {
    DeleteResult result;
    uint64_t erases = 0;
    double chip_residual = -1;
    double stored_residual = -1;
};

// Fresh device, one write, one delete of that page: the block holds only the
// target, so the measurement has no relocation noise.
SingleDelete run_single(TechniqueId t, std::optional<PrivacyLevel> level = {}) {
    Simulator sim(default_config());
    const Geometry& g = sim.config().geometry;
    sim.write(0, page(g, 42), t == TechniqueId::CryptoErase);
    SingleDelete out;
    out.result = level ? sim.secure_delete(0, *level)
                       : sim.secure_delete_technique(0, t);
    out.erases = sim.metrics().op_count(OpKind::Erase);
    RecoveryEntry e = recover_page(sim.dump(), sim.reference(), 0);
    out.chip_residual = e.chip_recoverable;
    out.stored_residual = e.stored_recoverable;
    return out;
}

std::vector<uint8_t> slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::vector<uint8_t>(std::istreambuf_iterator<char>(in), {});
}

void check_dispatch() {
    std::ostringstream detail;
    bool ok = true;
    const std::pair<PrivacyLevel, const char*> table[] = {
        {PrivacyLevel::PL0, "erase"},
        {PrivacyLevel::PL1, "scrub"},
        {PrivacyLevel::PL2, "eccmod"},
        {PrivacyLevel::PL3, "mapout"},
    };
    for (auto [level, expected] : table) {
        Simulator sim(default_config());
        sim.write(0, page(sim.config().geometry, 1), false);
        DeleteResult r = sim.secure_delete(0, level);
        const char* got =
            r.status == DeleteStatus::Ok ? technique_name(r.outcome.technique) : "?";
        if (r.status != DeleteStatus::Ok || std::string(got) != expected) {
            ok = false;
            detail << level_name(level) << " dispatched to '" << got << "' not '"
                   << expected << "' ";
        }
    }
    report(1, "privacy levels dispatch to the documented techniques", ok, detail.str());
}

void check_eccmod_poisoning() {
    Simulator sim(default_config());
    const Geometry& g = sim.config().geometry;
    const uint32_t n = 1000;
    for (uint32_t i = 0; i < n; ++i) sim.write(i, page(g, 1000 + i), false);
    uint32_t poisoned = 0;
    for (uint32_t i = 0; i < n; ++i) {
        DeleteResult r = sim.secure_delete(i, PrivacyLevel::PL2);
        if (r.status == DeleteStatus::Ok && r.outcome.verification.controller_denied &&
            r.outcome.verification.denial_kind == ReadStatus::Poisoned)
            poisoned++;
    }
    std::ostringstream detail;
    detail << poisoned << "/" << n << " pages denied as Poisoned";
    report(2, "parity poisoning denies all controller reads", poisoned == n,
           detail.str());
}

void check_level_cost_ordering() {
    SingleDelete pl0 = run_single(TechniqueId::BlockErase, PrivacyLevel::PL0);
    SingleDelete pl1 = run_single(TechniqueId::Scrub, PrivacyLevel::PL1);
    SingleDelete pl2 = run_single(TechniqueId::EccModulation, PrivacyLevel::PL2);
    SingleDelete pl3 = run_single(TechniqueId::MapOut, PrivacyLevel::PL3);
    double l0 = pl0.result.outcome.latency_us;
    double l1 = pl1.result.outcome.latency_us;
    double l2 = pl2.result.outcome.latency_us;
    double l3 = pl3.result.outcome.latency_us;
    bool latency_ok = l0 > l1 && l1 > l2 && l2 >= l3;
    bool endurance_ok =
        pl0.erases == 1 && pl1.erases == 0 && pl2.erases == 0 && pl3.erases == 0;
    std::ostringstream detail;
    detail << "latency us PL0=" << l0 << " PL1=" << l1 << " PL2=" << l2
           << " PL3=" << l3 << "; erases " << pl0.erases << "/" << pl1.erases << "/"
           << pl2.erases << "/" << pl3.erases;
    report(3, "per-level latency decreases and only PL0 consumes an erase",
           latency_ok && endurance_ok, detail.str());
}

void check_technique_cost_ordering() {
    const TechniqueId all[] = {
        TechniqueId::Unmap,     TechniqueId::CryptoErase, TechniqueId::BlockErase,
        TechniqueId::Scrub,     TechniqueId::Overwrite,   TechniqueId::DeletionPulse,
        TechniqueId::DownLevel, TechniqueId::EccModulation,
        TechniqueId::FlagLock,  TechniqueId::MapOut,
    };
    std::map<TechniqueId, double> lat;
    bool all_ok = true;
    for (TechniqueId t : all) {
        SingleDelete s = run_single(t);
        if (s.result.status != DeleteStatus::Ok) all_ok = false;
        lat[t] = s.result.outcome.latency_us;
    }
    double max_other = 0;
    double min_other = 1e18;
    for (auto [t, l] : lat) {
        if (t == TechniqueId::BlockErase) continue;
        max_other = std::max(max_other, l);
        if (t != TechniqueId::Unmap) min_other = std::min(min_other, l);
    }
    CostParams costs;
    bool ok = all_ok &&
              lat[TechniqueId::Unmap] <= min_other &&           // unmap is cheapest
              lat[TechniqueId::BlockErase] > max_other &&       // erase is dearest
              lat[TechniqueId::Overwrite] > lat[TechniqueId::Scrub] &&
              lat[TechniqueId::Scrub] > lat[TechniqueId::EccModulation] &&
              lat[TechniqueId::EccModulation] == lat[TechniqueId::FlagLock] &&
              lat[TechniqueId::EccModulation] <=
                  costs.latency(OpKind::PartialProgram) + costs.latency(OpKind::Read) +
                      costs.latency(OpKind::Meta) &&
              lat[TechniqueId::CryptoErase] < lat[TechniqueId::Scrub];
    std::ostringstream detail;
    for (TechniqueId t : all) detail << technique_name(t) << "=" << lat[t] << " ";
    report(4, "technique latencies keep the documented cost ordering", ok,
           detail.str());
}

void check_forensic_residuals() {
    struct Expect {
        TechniqueId t;
        double chip;
    };
    const Expect expects[] = {
        {TechniqueId::Unmap, 1.0},         {TechniqueId::EccModulation, 1.0},
        {TechniqueId::FlagLock, 1.0},      {TechniqueId::MapOut, 1.0},
        {TechniqueId::BlockErase, 0.0},    {TechniqueId::Scrub, 0.0},
        {TechniqueId::Overwrite, 0.0},     {TechniqueId::DeletionPulse, 0.0},
        {TechniqueId::DownLevel, 0.0},
    };
    bool ok = true;
    std::ostringstream detail;
    for (const Expect& e : expects) {
        SingleDelete s = run_single(e.t);
        if (s.chip_residual != e.chip) {
            ok = false;
            detail << technique_name(e.t) << "=" << s.chip_residual << " (want "
                   << e.chip << ") ";
        }
    }
    SingleDelete crypto = run_single(TechniqueId::CryptoErase);
    if (crypto.stored_residual != 1.0 || crypto.chip_residual > 0.02) {
        ok = false;
        detail << "crypto stored=" << crypto.stored_residual
               << " chip=" << crypto.chip_residual << " ";
    }
    report(5, "chip-level residuals are exactly 1.0 or 0.0 per technique", ok,
           detail.str());
}

void check_ecc_strength() {
    Geometry g;
    g.page_data_bytes = 512;  // single-sector page: exhaustive sweep is feasible
    bool ok = true;
    std::ostringstream detail;

    std::vector<uint8_t> data = random_page(7, g.page_data_bytes);
    std::vector<uint8_t> sp = encode_spare(data, g);
    uint32_t corrected = 0;
    for (uint32_t bit = 0; bit < 4096; ++bit) {
        std::vector<uint8_t> bad = data;
        bad[bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        DecodeOutcome out = decode_page(bad, sp, g);
        if (out.verdict == Verdict::Ok && out.data == data) corrected++;
    }
    for (uint32_t bit = 0; bit < 16; ++bit) {
        std::vector<uint8_t> bad = sp;
        bad[spare::kParityOffset + bit / 8] ^= static_cast<uint8_t>(1u << (bit % 8));
        DecodeOutcome out = decode_page(data, bad, g);
        if (out.verdict == Verdict::Ok && out.data == data) corrected++;
    }
    if (corrected != 4096 + 16) {
        ok = false;
        detail << "corrected " << corrected << "/4112 single flips ";
    }

    std::mt19937_64 rng(99);
    uint32_t detected = 0;
    const uint32_t doubles = 10000;
    for (uint32_t i = 0; i < doubles; ++i) {
        uint32_t a = static_cast<uint32_t>(rng() % 4096);
        uint32_t b = static_cast<uint32_t>(rng() % 4096);
        if (a == b) b = (b + 1) % 4096;
        std::vector<uint8_t> bad = data;
        bad[a / 8] ^= static_cast<uint8_t>(1u << (a % 8));
        bad[b / 8] ^= static_cast<uint8_t>(1u << (b % 8));
        if (decode_page(bad, sp, g).verdict == Verdict::Uncorrectable) detected++;
    }
    if (detected != doubles) {
        ok = false;
        detail << "detected " << detected << "/" << doubles << " double flips ";
    }

    Geometry full;  // stock 2048-byte pages, four sectors
    uint32_t roundtrips = 0;
    for (uint32_t i = 0; i < 1000; ++i) {
        std::vector<uint8_t> d = random_page(5000 + i, full.page_data_bytes);
        DecodeOutcome out = decode_page(d, encode_spare(d, full), full);
        if (out.verdict == Verdict::Ok && out.data == d) roundtrips++;
    }
    if (roundtrips != 1000) {
        ok = false;
        detail << "roundtrips " << roundtrips << "/1000 ";
    }
    report(6, "SEC-DED corrects every single flip and flags every double flip", ok,
           detail.str());
}

void check_flag_irreversibility() {
    std::mt19937_64 outer(20240817);
    uint32_t sequences_ok = 0;
    const int sequences = 100, ops = 50;
    for (int s = 0; s < sequences; ++s) {
        Config cfg = default_config(outer());
        Simulator sim(cfg);
        const Geometry& g = cfg.geometry;
        sim.write(0, page(g, outer()), false);
        Ppa target = *sim.ftl().mapping(0);
        uint32_t tb = target / g.pages_per_block;
        if (sim.secure_delete(0, PrivacyLevel::PL2, TechniqueId::FlagLock).status !=
            DeleteStatus::Ok)
            continue;

        std::mt19937_64 rng(outer());
        bool held = true;
        for (int op = 0; op < ops && held; ++op) {
            uint32_t lpa = 1 + static_cast<uint32_t>(rng() % 64);
            switch (rng() % 4) {
                case 0: sim.write(lpa, page(g, rng()), rng() % 2 == 0); break;
                case 1: sim.read(lpa); break;
                case 2: sim.trim(lpa); break;
                case 3:
                    if (sim.ftl().mapping(lpa))
                        sim.secure_delete_technique(
                            lpa, rng() % 2 ? TechniqueId::Scrub : TechniqueId::Unmap);
                    break;
            }
            if (sim.nand().block(tb).erase_count != 0) continue;  // recycled
            const PageState& raw = sim.nand().read_raw(tb, target % g.pages_per_block);
            if (decode_page(raw.data, raw.spare, g).verdict != Verdict::Locked)
                held = false;
        }
        if (held) sequences_ok++;
    }
    std::ostringstream detail;
    detail << sequences_ok << "/" << sequences << " sequences stayed locked";
    report(7, "flag locks survive arbitrary later controller activity",
           sequences_ok == sequences, detail.str());
}

void check_write_amplification() {
    Simulator seq(default_config());
    const Geometry& g = seq.config().geometry;
    for (uint32_t i = 0; i < 5000; ++i) seq.write(i, page(g, i), false);
    auto wa_seq = seq.metrics().write_amplification();

    Simulator rnd(default_config());
    uint32_t span = static_cast<uint32_t>(rnd.ftl().logical_capacity() * 0.8);
    std::mt19937_64 rng(4);
    for (uint32_t i = 0; i < 30000; ++i)
        rnd.write(static_cast<uint32_t>(rng() % span), page(g, rng()), false);
    auto wa_rnd = rnd.metrics().write_amplification();

    bool ok = wa_seq && *wa_seq == 1.0 && wa_rnd && *wa_rnd > 1.05;
    std::ostringstream detail;
    detail << "sequential=" << (wa_seq ? *wa_seq : -1)
           << " random-overwrite=" << (wa_rnd ? *wa_rnd : -1);
    report(8, "write amplification is 1.0 sequential and above 1.05 under churn",
           ok, detail.str());
}

void check_determinism() {
    std::ostringstream trace;
    trace << "C 2 1 0\n";
    for (int i = 0; i < 120; ++i)
        trace << "W " << (i % 60) << " seed:" << (9000 + i)
              << (i % 3 == 0 ? " enc" : "") << "\n";
    trace << "X\n";
    for (int i = 0; i < 12; ++i) {
        const char* spec[] = {"PL0", "PL1", "PL2", "PL3", "auto", "scrub",
                              "overwrite", "pulse", "downlevel", "flaglock",
                              "crypto", "unmap"};
        if (std::string(spec[i]) == "crypto")
            trace << "D " << (i * 3) << " crypto\n";
        else
            trace << "D " << (i * 3 + 1) << " " << spec[i] << "\n";
    }
    trace << "G 128\nX\n";
    auto parsed = parse_trace(trace.str());
    bool ok = std::holds_alternative<std::vector<TraceEvent>>(parsed);
    std::ostringstream detail;
    fs::path base = fs::temp_directory_path() / "apsd_acceptance";
    if (ok) {
        RunOptions opts;
        opts.config = default_config(777);
        opts.trace = std::get<std::vector<TraceEvent>>(parsed);
        for (const char* d : {"a", "b"}) {
            opts.out_dir = (base / d).string();
            RunResult r = run_trace(opts);
            if (r.exit_code != 0) {
                ok = false;
                detail << "run failed: " << r.error << " ";
            }
        }
    }
    if (ok) {
        for (const char* f : {"metrics.csv", "techniques.csv", "levels.csv",
                              "reference.json", "final.snap", "dump_000.snap",
                              "dump_001.snap"}) {
            if (slurp(base / "a" / f) != slurp(base / "b" / f)) {
                ok = false;
                detail << f << " differs ";
            }
        }
    }
    if (ok) {
        Config cfg = default_config(777);
        auto loaded = load_snapshot((base / "a" / "final.snap").string(), cfg);
        if (auto* err = std::get_if<SnapshotError>(&loaded)) {
            ok = false;
            detail << "reload failed: " << err->message;
        } else {
            auto& sim = *std::get<std::unique_ptr<Simulator>>(loaded);
            std::vector<uint8_t> again = serialize_snapshot(sim);
            if (again != slurp(base / "a" / "final.snap")) {
                ok = false;
                detail << "save/load/save not byte-stable ";
            }
        }
    }
    fs::remove_all(base);
    report(9, "identical runs and snapshot reload are byte-identical", ok,
           detail.str());
}

void check_policy_monotonicity() {
    PolicyTable table;  // stock weights
    std::mt19937_64 rng(31);
    uint32_t violations = 0;
    const int trials = 10000;
    for (int i = 0; i < trials; ++i) {
        ContextVector c;
        c.sensitivity = static_cast<int>(rng() % 4);
        c.network_trust = static_cast<int>(rng() % 3);
        c.threat_alert = rng() % 2 == 1;
        c.workload_pressure = static_cast<double>(rng() % 1001) / 1000.0;
        PrivacyLevel base = select_level(c, table);

        ContextVector v = c;
        if (v.sensitivity < 3) {
            v.sensitivity++;
            if (select_level(v, table) < base) violations++;
        }
        v = c;
        if (!v.threat_alert) {
            v.threat_alert = true;
            if (select_level(v, table) < base) violations++;
        }
        v = c;
        if (v.network_trust < 2) {
            v.network_trust++;
            if (select_level(v, table) > base) violations++;
        }
        v = c;
        v.workload_pressure = std::min(1.0, v.workload_pressure + 0.25);
        if (select_level(v, table) > base) violations++;
    }
    std::ostringstream detail;
    detail << violations << " violations over " << trials << " contexts";
    report(10, "policy level selection is monotone in every context field",
           violations == 0, detail.str());
}

}  // namespace

int main() {
    check_dispatch();
    check_eccmod_poisoning();
    check_level_cost_ordering();
    check_technique_cost_ordering();
    check_forensic_residuals();
    check_ecc_strength();
    check_flag_irreversibility();
    check_write_amplification();
    check_determinism();
    check_policy_monotonicity();
    if (failures) {
        std::printf("%d acceptance check(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance checks passed\n");
    return 0;
}
