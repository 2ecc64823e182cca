#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace apsd {

enum class PrivacyLevel { PL0 = 0, PL1, PL2, PL3 };
const char* level_name(PrivacyLevel l);
std::optional<PrivacyLevel> parse_level(const std::string& s);

struct ContextVector {
    int sensitivity = 0;       // 0..3
    int network_trust = 1;     // 0=hostile, 1=unknown, 2=trusted
    bool threat_alert = false;
    double workload_pressure = 0;  // 0..1 free-space scarcity
};

// Deterministic linear score with increasing thresholds; stands in for the
// context-aware selection logic. Score equal to a threshold maps upward.
struct PolicyTable {
    double w_sensitivity = 1.0;
    double w_trust = -0.5;
    double w_alert = 1.5;
    double w_pressure = -1.0;
    double t1 = 0.5;
    double t2 = 1.5;
    double t3 = 2.5;

    bool thresholds_valid() const { return t1 < t2 && t2 < t3; }
};

double policy_score(const ContextVector& ctx, const PolicyTable& table);
PrivacyLevel select_level(const ContextVector& ctx, const PolicyTable& table);

}  // namespace apsd
