#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "apsd/harness.hpp"
#include "apsd/snapshot.hpp"

namespace {

bool read_file(const std::string& path, std::string& out) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return false;
    std::ostringstream os;
    os << f.rdbuf();
    out = os.str();
    return true;
}

// Seed priority: --seed flag, then config [sim] seed, then APSD_SEED.
uint64_t resolve_seed(uint64_t config_seed, bool config_had_seed,
                      std::optional<uint64_t> flag_seed) {
    if (flag_seed) return *flag_seed;
    if (config_had_seed) return config_seed;
    if (const char* env = std::getenv("APSD_SEED")) {
        char* end = nullptr;
        unsigned long long v = strtoull(env, &end, 10);
        if (end != env && !*end) return v;
    }
    return config_seed;
}

std::optional<apsd::Config> load_config_file(const std::string& path,
                                             bool& had_seed) {
    std::string text;
    if (!path.empty() && !read_file(path, text)) {
        std::cerr << "error: cannot read config " << path << "\n";
        return std::nullopt;
    }
    had_seed = text.find("seed") != std::string::npos;
    auto parsed = apsd::parse_config(text);
    if (auto* err = std::get_if<apsd::ConfigError>(&parsed)) {
        std::cerr << "error: config: " << err->message << "\n";
        return std::nullopt;
    }
    return std::get<apsd::Config>(parsed);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive privacy-preserving SSD simulator"};
    app.require_subcommand(1);

    std::string config_path, trace_path, out_dir = "out";
    std::optional<uint64_t> seed_flag;
    std::string level_default;

    auto* run = app.add_subcommand("run", "Execute a workload trace");
    run->add_option("--config", config_path, "Config file");
    run->add_option("--trace", trace_path, "Trace file")->required();
    run->add_option("--out-dir", out_dir, "Output directory");
    run->add_option("--seed", seed_flag, "RNG seed (overrides config)");
    run->add_option("--level-default", level_default,
                    "Level for D events without a level (PL0..PL3)");

    std::string snap_path, ref_path, report_out;
    auto* forensics = app.add_subcommand("forensics", "Residual-data report from a snapshot");
    forensics->add_option("--snapshot", snap_path, "Snapshot file")->required();
    forensics->add_option("--reference", ref_path, "Reference file")->required();
    forensics->add_option("--config", config_path, "Config file");
    forensics->add_option("--out", report_out, "Report CSV path (default stdout)");

    std::string report_dir;
    auto* report = app.add_subcommand("report", "Summarize a run's output directory");
    report->add_option("--dir", report_dir, "Run output directory")->required();

    auto* info = app.add_subcommand("snapshot-info", "Print snapshot header");
    info->add_option("--snapshot", snap_path, "Snapshot file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        bool had_seed = false;
        auto cfg = load_config_file(config_path, had_seed);
        if (!cfg) return 2;
        cfg->seed = resolve_seed(cfg->seed, had_seed, seed_flag);

        std::string trace_text;
        if (!read_file(trace_path, trace_text)) {
            std::cerr << "error: cannot read trace " << trace_path << "\n";
            return 2;
        }
        auto parsed = apsd::parse_trace(trace_text);
        if (auto* err = std::get_if<apsd::ParseError>(&parsed)) {
            std::cerr << "error: trace line " << err->line << ": " << err->message << "\n";
            return 2;
        }

        apsd::RunOptions opts;
        opts.config = *cfg;
        opts.trace = std::get<std::vector<apsd::TraceEvent>>(parsed);
        opts.out_dir = out_dir;
        if (!level_default.empty()) {
            auto lvl = apsd::parse_level(level_default);
            if (!lvl) {
                std::cerr << "error: bad --level-default " << level_default << "\n";
                return 2;
            }
            opts.level_default = lvl;
        }
        apsd::RunResult r = apsd::run_trace(opts);
        if (r.exit_code != 0) std::cerr << "error: " << r.error << "\n";
        return r.exit_code;
    }

    if (forensics->parsed()) {
        bool had_seed = false;
        auto cfg = load_config_file(config_path, had_seed);
        if (!cfg) return 2;
        apsd::ForensicsResult r = apsd::run_forensics(snap_path, ref_path, *cfg);
        if (!r.ok) {
            std::cerr << "error: " << r.error << "\n";
            return 1;
        }
        if (report_out.empty()) {
            std::cout << r.csv;
        } else {
            std::ofstream f(report_out, std::ios::trunc);
            f << r.csv;
            if (!f) {
                std::cerr << "error: cannot write " << report_out << "\n";
                return 1;
            }
        }
        return 0;
    }

    if (report->parsed()) {
        for (const char* name : {"metrics.csv", "techniques.csv", "levels.csv"}) {
            std::string text;
            if (!read_file(report_dir + "/" + name, text)) {
                std::cerr << "error: missing " << name << " in " << report_dir << "\n";
                return 1;
            }
            std::cout << "== " << name << " ==\n" << text << "\n";
        }
        return 0;
    }

    if (info->parsed()) {
        auto r = apsd::snapshot_info(snap_path);
        if (auto* err = std::get_if<apsd::SnapshotError>(&r)) {
            std::cerr << "error: " << err->message << "\n";
            return 1;
        }
        const auto& si = std::get<apsd::SnapshotInfo>(r);
        std::cout << "version: " << si.version << "\n"
                  << "geometry: " << si.geometry.blocks << " blocks x "
                  << si.geometry.pages_per_block << " pages x ("
                  << si.geometry.page_data_bytes << "+"
                  << si.geometry.page_spare_bytes << ") bytes\n"
                  << "erase_limit: " << si.geometry.erase_limit << "\n"
                  << "partial_program_limit: " << si.geometry.partial_program_limit << "\n"
                  << "mapped_out_blocks: " << si.mapped_out_blocks << "\n"
                  << "mapping_entries: " << si.mapping_entries << "\n"
                  << "keystore_entries: " << si.keystore_entries << "\n"
                  << "crc: ok\n";
        return 0;
    }
    return 0;
}
