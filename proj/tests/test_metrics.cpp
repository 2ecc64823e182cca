#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "apsd/delete_engine.hpp"
#include "apsd/metrics.hpp"
#include "common.hpp"

using namespace apsd;

TEST_CASE("per-op costs accumulate additively") {
    MetricsLedger m;
    m.record(OpKind::Read);
    m.record(OpKind::Program);
    m.record(OpKind::Erase);
    m.record(OpKind::Meta);
    CHECK(m.total_latency_us() == doctest::Approx(50 + 600 + 3500 + 10));
    CHECK(m.total_energy_uj() == doctest::Approx(30 + 90 + 250 + 1));
    CHECK(m.op_count(OpKind::Read) == 1);
    CHECK(m.op_count(OpKind::Program) == 1);
    CHECK(m.op_count(OpKind::PartialProgram) == 0);
}

TEST_CASE("block erase cost includes relocation of valid pages") {
    CostParams p;
    // T_erase + valid * (T_read + T_program)
    CHECK(MetricsLedger::block_erase_cost(p, 0) == doctest::Approx(3500));
    CHECK(MetricsLedger::block_erase_cost(p, 10) == doctest::Approx(10000));
    CHECK(MetricsLedger::block_erase_cost(p, 63) == doctest::Approx(44450));
}

TEST_CASE("custom cost params flow through") {
    CostParams p;
    p.latency_us[static_cast<int>(OpKind::Erase)] = 5000;
    p.energy_uj[static_cast<int>(OpKind::Erase)] = 400;
    MetricsLedger m(p);
    m.record(OpKind::Erase);
    CHECK(m.total_latency_us() == doctest::Approx(5000));
    CHECK(m.total_energy_uj() == doctest::Approx(400));
    CHECK(MetricsLedger::block_erase_cost(p, 2) == doctest::Approx(5000 + 2 * 650));
}

TEST_CASE("totals equal an independent replay of the op log") {
    Geometry g = small_geom();
    NandArray nand(g, 5);
    MetricsLedger metrics;
    Ftl ftl(nand, metrics, 0.1);
    DeleteEngine engine(ftl);

    for (uint32_t i = 0; i < 40; ++i)
        ftl.host_write(i % 20, page_of(g, i), i % 3 == 0);
    engine.secure_delete(0, PrivacyLevel::PL1);
    engine.secure_delete(1, PrivacyLevel::PL2);
    engine.secure_delete(2, PrivacyLevel::PL0);
    engine.secure_delete(3, PrivacyLevel::PL3);
    ftl.garbage_collect(ftl.free_pages() + 1);

    double lat = 0, en = 0;
    for (OpKind k : metrics.op_log()) {
        lat += metrics.params().latency(k);
        en += metrics.params().energy(k);
    }
    CHECK(metrics.total_latency_us() == doctest::Approx(lat));
    CHECK(metrics.total_energy_uj() == doctest::Approx(en));

    uint64_t counted = 0;
    for (int k = 0; k < kOpKinds; ++k)
        counted += metrics.op_count(static_cast<OpKind>(k));
    CHECK(counted == metrics.op_log().size());
}

TEST_CASE("write amplification is physical over logical") {
    MetricsLedger m;
    CHECK_FALSE(m.write_amplification().has_value());
    for (int i = 0; i < 10; ++i) {
        m.record(OpKind::Program);
        m.note_logical_write();
    }
    REQUIRE(m.write_amplification().has_value());
    CHECK(*m.write_amplification() == doctest::Approx(1.0));
    m.record(OpKind::Program);  // a relocation: physical but not logical
    m.note_relocation();
    CHECK(*m.write_amplification() == doctest::Approx(1.1));
    CHECK(m.relocations() == 1);
}

TEST_CASE("deletions are attributed to technique and level") {
    Geometry g = small_geom();
    NandArray nand(g, 5);
    MetricsLedger metrics;
    Ftl ftl(nand, metrics, 0.1);
    DeleteEngine engine(ftl);
    for (uint32_t i = 0; i < 6; ++i) ftl.host_write(i, page_of(g, i), false);

    engine.secure_delete(0, PrivacyLevel::PL1);                        // scrub
    engine.secure_delete(1, PrivacyLevel::PL1);                        // scrub
    engine.secure_delete(2, PrivacyLevel::PL1, TechniqueId::Overwrite);
    engine.secure_delete(3, PrivacyLevel::PL2);                        // eccmod

    auto techniques = metrics.technique_profile();
    REQUIRE(techniques.size() == 3);  // sorted by name: eccmod, overwrite, scrub
    CHECK(techniques[0].technique == "eccmod");
    CHECK(techniques[0].deletions == 1);
    CHECK(techniques[1].technique == "overwrite");
    CHECK(techniques[1].deletions == 1);
    CHECK(techniques[2].technique == "scrub");
    CHECK(techniques[2].deletions == 2);

    // scrub: partial + zero-verify read + denial-verify read + unmap meta.
    CHECK(techniques[2].latency_us == doctest::Approx(2 * (200 + 50 + 50 + 10)));
    CHECK(techniques[2].partial_programs == 2);
    CHECK(techniques[2].reads == 4);
    // eccmod: partial + denial-verify read + unmap meta.
    CHECK(techniques[0].latency_us == doctest::Approx(200 + 50 + 10));
    // overwrite: 2 partials + 2 verify reads + denial read + unmap meta.
    CHECK(techniques[1].latency_us == doctest::Approx(2 * 200 + 3 * 50 + 10));

    auto levels = metrics.level_profile();
    REQUIRE(levels.size() == 2);
    CHECK(levels[0].level == "PL1");
    CHECK(levels[0].deletions == 3);
    CHECK(levels[1].level == "PL2");
    CHECK(levels[1].deletions == 1);
    CHECK(levels[0].latency_us ==
          doctest::Approx(techniques[2].latency_us + techniques[1].latency_us));
}

TEST_CASE("ops outside a deletion are not attributed to any technique") {
    Geometry g = small_geom();
    NandArray nand(g, 5);
    MetricsLedger metrics;
    Ftl ftl(nand, metrics, 0.1);
    for (uint32_t i = 0; i < 6; ++i) ftl.host_write(i, page_of(g, i), false);
    CHECK(metrics.technique_profile().empty());
    CHECK(metrics.level_profile().empty());
}

TEST_CASE("per-block erase counts are tracked") {
    Geometry g = small_geom();
    NandArray nand(g, 5);
    MetricsLedger metrics;
    Ftl ftl(nand, metrics, 0.1);
    ftl.host_write(0, page_of(g, 0), false);
    uint32_t block = *ftl.mapping(0) / g.pages_per_block;
    ftl.trim_unmap(0);
    ftl.host_write(1, page_of(g, 1), false);  // close helper not needed here
    DeleteEngine engine(ftl);
    engine.secure_delete(1, PrivacyLevel::PL0);
    auto counts = metrics.block_erase_counts();
    REQUIRE(counts.count(block) == 1);
    CHECK(counts.at(block) == 1);
    CHECK(metrics.op_count(OpKind::Erase) == 1);
}

TEST_CASE("technique latency delta matches the profile row") {
    Geometry g = small_geom();
    NandArray nand(g, 5);
    MetricsLedger metrics;
    Ftl ftl(nand, metrics, 0.1);
    DeleteEngine engine(ftl);
    ftl.host_write(0, page_of(g, 0), false);
    DeleteResult res = engine.secure_delete(0, PrivacyLevel::PL2);
    auto rows = metrics.technique_profile();
    REQUIRE(rows.size() == 1);
    CHECK(res.outcome.latency_us == doctest::Approx(rows[0].latency_us));
    CHECK(res.outcome.latency_us == doctest::Approx(260));
}
