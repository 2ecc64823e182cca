#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "apsd/config.hpp"
#include "apsd/forensics.hpp"
#include "apsd/simulator.hpp"
#include "apsd/trace.hpp"

namespace apsd {

std::string metrics_csv(const MetricsLedger& m);
std::string techniques_csv(const MetricsLedger& m);
std::string levels_csv(const MetricsLedger& m);

bool save_reference(const ReferenceStore& ref, const std::string& path);
std::variant<ReferenceStore, std::string> load_reference(const std::string& path);

struct RunOptions {
    Config config;
    std::vector<TraceEvent> trace;
    std::string out_dir;
    std::optional<PrivacyLevel> level_default;  // for 'D lpa' with no spec
};

struct RunResult {
    int exit_code = 0;
    std::string error;  // names the offending trace line on fatal errors
};

// Executes the trace against one simulator and writes metrics.csv,
// techniques.csv, levels.csv, final.snap, reference.json and run.log into
// out_dir (plus dump_NNN.snap per X checkpoint).
RunResult run_trace(const RunOptions& opts);

struct ForensicsResult {
    bool ok = false;
    std::string csv;    // when ok
    std::string error;  // when !ok (e.g. CorruptSnapshot)
};

// Loads a snapshot (CRC-verified) plus a reference file and emits the
// residual report CSV.
ForensicsResult run_forensics(const std::string& snapshot_path,
                              const std::string& reference_path,
                              const Config& config);

}  // namespace apsd
