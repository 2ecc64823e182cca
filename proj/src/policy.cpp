#include "apsd/policy.hpp"

namespace apsd {

const char* level_name(PrivacyLevel l) {
    switch (l) {
        case PrivacyLevel::PL0: return "PL0";
        case PrivacyLevel::PL1: return "PL1";
        case PrivacyLevel::PL2: return "PL2";
        case PrivacyLevel::PL3: return "PL3";
    }
    return "?";
}

std::optional<PrivacyLevel> parse_level(const std::string& s) {
    if (s == "PL0") return PrivacyLevel::PL0;
    if (s == "PL1") return PrivacyLevel::PL1;
    if (s == "PL2") return PrivacyLevel::PL2;
    if (s == "PL3") return PrivacyLevel::PL3;
    return std::nullopt;
}

double policy_score(const ContextVector& ctx, const PolicyTable& t) {
    return t.w_sensitivity * ctx.sensitivity + t.w_trust * ctx.network_trust +
           t.w_alert * (ctx.threat_alert ? 1.0 : 0.0) +
           t.w_pressure * ctx.workload_pressure;
}

PrivacyLevel select_level(const ContextVector& ctx, const PolicyTable& t) {
    double score = policy_score(ctx, t);
    if (score < t.t1) return PrivacyLevel::PL0;
    if (score < t.t2) return PrivacyLevel::PL1;
    if (score < t.t3) return PrivacyLevel::PL2;
    return PrivacyLevel::PL3;
}

}  // namespace apsd
