#include "apsd/harness.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "apsd/snapshot.hpp"

namespace apsd {

namespace {

std::string fmt(double v) {
    char buf[64];
    snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

std::vector<uint8_t> from_hex(const std::string& s) {
    std::vector<uint8_t> out;
    for (size_t i = 0; i + 1 < s.size(); i += 2) {
        auto nib = [](char c) -> uint8_t {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            return 0;
        };
        out.push_back(static_cast<uint8_t>(nib(s[i]) << 4 | nib(s[i + 1])));
    }
    return out;
}

bool write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << content;
    return static_cast<bool>(f);
}

}  // namespace

std::string metrics_csv(const MetricsLedger& m) {
    std::ostringstream os;
    os << "counter,value\n";
    os << "reads," << m.op_count(OpKind::Read) << "\n";
    os << "programs," << m.op_count(OpKind::Program) << "\n";
    os << "partial_programs," << m.op_count(OpKind::PartialProgram) << "\n";
    os << "erases," << m.op_count(OpKind::Erase) << "\n";
    os << "pulses," << m.op_count(OpKind::Pulse) << "\n";
    os << "downlevels," << m.op_count(OpKind::DownLevel) << "\n";
    os << "metas," << m.op_count(OpKind::Meta) << "\n";
    os << "logical_pages_written," << m.logical_pages_written() << "\n";
    os << "physical_pages_programmed," << m.physical_pages_programmed() << "\n";
    os << "relocations," << m.relocations() << "\n";
    os << "total_latency_us," << fmt(m.total_latency_us()) << "\n";
    os << "total_energy_uj," << fmt(m.total_energy_uj()) << "\n";
    auto wa = m.write_amplification();
    os << "write_amplification," << (wa ? fmt(*wa) : "undefined") << "\n";
    return os.str();
}

std::string techniques_csv(const MetricsLedger& m) {
    std::ostringstream os;
    os << "technique,deletions,latency_us,energy_uj,erases,partial_programs,programs,reads\n";
    for (const auto& t : m.technique_profile()) {
        os << t.technique << "," << t.deletions << "," << fmt(t.latency_us) << ","
           << fmt(t.energy_uj) << "," << t.erases << "," << t.partial_programs
           << "," << t.programs << "," << t.reads << "\n";
    }
    return os.str();
}

std::string levels_csv(const MetricsLedger& m) {
    std::ostringstream os;
    os << "level,deletions,latency_us,energy_uj,erases\n";
    for (const auto& l : m.level_profile()) {
        os << l.level << "," << l.deletions << "," << fmt(l.latency_us) << ","
           << fmt(l.energy_uj) << "," << l.erases << "\n";
    }
    return os.str();
}

bool save_reference(const ReferenceStore& ref, const std::string& path) {
    nlohmann::json j;
    j["writes"] = nlohmann::json::array();
    for (const auto& [lpa, h] : ref.writes) {
        nlohmann::json w;
        w["lpa"] = lpa;
        w["plaintext"] = to_hex(h.plaintext);
        w["stored"] = to_hex(h.stored);
        w["history"] = h.history;
        j["writes"].push_back(std::move(w));
    }
    j["deletions"] = nlohmann::json::array();
    for (const auto& d : ref.deletions) {
        j["deletions"].push_back({{"lpa", d.lpa},
                                  {"technique", d.technique},
                                  {"controller_denied", d.controller_denied}});
    }
    return write_file(path, j.dump(2) + "\n");
}

std::variant<ReferenceStore, std::string> load_reference(const std::string& path) {
    std::ifstream f(path);
    if (!f) return "cannot open " + path;
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::exception& e) {
        return std::string("bad reference file: ") + e.what();
    }
    ReferenceStore ref;
    try {
        for (const auto& w : j.at("writes")) {
            WriteHistory h;
            h.plaintext = from_hex(w.at("plaintext").get<std::string>());
            h.stored = from_hex(w.at("stored").get<std::string>());
            h.history = w.at("history").get<std::vector<uint32_t>>();
            ref.writes[w.at("lpa").get<uint32_t>()] = std::move(h);
        }
        for (const auto& d : j.at("deletions")) {
            ref.deletions.push_back({d.at("lpa").get<uint32_t>(),
                                     d.at("technique").get<std::string>(),
                                     d.at("controller_denied").get<bool>()});
        }
    } catch (const nlohmann::json::exception& e) {
        return std::string("bad reference file: ") + e.what();
    }
    return ref;
}

RunResult run_trace(const RunOptions& opts) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(opts.out_dir, ec);

    Simulator sim(opts.config);
    std::ostringstream log;
    uint32_t dump_count = 0;
    RunResult result;

    auto fatal = [&](uint32_t line, const std::string& msg) {
        result.exit_code = 1;
        result.error = "trace line " + std::to_string(line) + ": " + msg;
        log << "FATAL " << result.error << "\n";
    };

    for (const TraceEvent& ev : opts.trace) {
        if (result.exit_code != 0) break;
        switch (ev.verb) {
            case TraceEvent::Verb::Write: {
                std::vector<uint8_t> data;
                if (ev.payload_is_seed) {
                    data = random_page(ev.payload_seed,
                                       opts.config.geometry.page_data_bytes);
                } else {
                    data = ev.payload_hex;
                    data.resize(opts.config.geometry.page_data_bytes, 0xFF);
                }
                WriteStatus st = sim.write(ev.lpa, data, ev.encrypted);
                log << "line " << ev.line << ": W " << ev.lpa << " -> "
                    << (st == WriteStatus::Ok ? "Ok"
                        : st == WriteStatus::DeviceFull ? "DeviceFull" : "BadLpa")
                    << "\n";
                if (st != WriteStatus::Ok)
                    fatal(ev.line, st == WriteStatus::DeviceFull ? "device full"
                                                                 : "lpa out of range");
                break;
            }
            case TraceEvent::Verb::Read: {
                ReadResult r = sim.read(ev.lpa);
                log << "line " << ev.line << ": R " << ev.lpa << " -> "
                    << read_status_name(r.status) << "\n";
                break;
            }
            case TraceEvent::Verb::Trim: {
                TrimStatus st = sim.trim(ev.lpa);
                log << "line " << ev.line << ": T " << ev.lpa << " -> "
                    << (st == TrimStatus::Ok ? "Ok" : "Unmapped") << "\n";
                if (st != TrimStatus::Ok) fatal(ev.line, "trim of unmapped lpa");
                break;
            }
            case TraceEvent::Verb::Delete: {
                DeleteResult r;
                std::string spec;
                if (ev.del_technique) {
                    r = sim.secure_delete_technique(ev.lpa, *ev.del_technique);
                    spec = technique_name(*ev.del_technique);
                } else {
                    PrivacyLevel level;
                    if (ev.del_auto) {
                        level = sim.auto_level();
                        spec = std::string("auto(") + level_name(level) + ")";
                    } else if (ev.del_level) {
                        level = *ev.del_level;
                        spec = level_name(level);
                    } else {
                        level = opts.level_default.value_or(PrivacyLevel::PL0);
                        spec = std::string("default(") + level_name(level) + ")";
                    }
                    r = sim.secure_delete(ev.lpa, level);
                }
                log << "line " << ev.line << ": D " << ev.lpa << " " << spec
                    << " -> " << delete_status_name(r.status);
                if (r.status == DeleteStatus::Ok)
                    log << " technique=" << technique_name(r.outcome.technique)
                        << " denial=" << read_status_name(r.outcome.verification.denial_kind);
                log << "\n";
                if (r.status != DeleteStatus::Ok)
                    fatal(ev.line, std::string("delete failed: ") +
                                       delete_status_name(r.status));
                break;
            }
            case TraceEvent::Verb::Gc: {
                uint32_t moved = sim.gc(ev.min_free);
                log << "line " << ev.line << ": G " << ev.min_free
                    << " -> relocated " << moved << "\n";
                break;
            }
            case TraceEvent::Verb::Dump: {
                char name[32];
                snprintf(name, sizeof(name), "dump_%03u.snap", dump_count++);
                std::string path = opts.out_dir + "/" + name;
                save_snapshot(sim, path);
                log << "line " << ev.line << ": X -> " << name << "\n";
                break;
            }
            case TraceEvent::Verb::Context: {
                sim.set_context(ev.ctx_sensitivity, ev.ctx_trust, ev.ctx_alert);
                log << "line " << ev.line << ": C " << ev.ctx_sensitivity << " "
                    << ev.ctx_trust << " " << (ev.ctx_alert ? 1 : 0) << "\n";
                break;
            }
        }
    }

    write_file(opts.out_dir + "/metrics.csv", metrics_csv(sim.metrics()));
    write_file(opts.out_dir + "/techniques.csv", techniques_csv(sim.metrics()));
    write_file(opts.out_dir + "/levels.csv", levels_csv(sim.metrics()));
    save_reference(sim.reference(), opts.out_dir + "/reference.json");
    save_snapshot(sim, opts.out_dir + "/final.snap");
    write_file(opts.out_dir + "/run.log", log.str());
    return result;
}

ForensicsResult run_forensics(const std::string& snapshot_path,
                              const std::string& reference_path,
                              const Config& config) {
    ForensicsResult out;
    auto loaded = load_snapshot(snapshot_path, config);
    if (auto* err = std::get_if<SnapshotError>(&loaded)) {
        out.error = "CorruptSnapshot: " + err->message;
        return out;
    }
    auto& sim = std::get<std::unique_ptr<Simulator>>(loaded);
    auto ref = load_reference(reference_path);
    if (auto* err = std::get_if<std::string>(&ref)) {
        out.error = *err;
        return out;
    }
    ChipDump dump = sim->dump();
    RecoveryReport report = residual_report(dump, std::get<ReferenceStore>(ref));
    out.ok = true;
    out.csv = report_csv(report);
    return out;
}

}  // namespace apsd
