#include "apsd/config.hpp"

#include <cstdlib>
#include <sstream>

namespace apsd {

namespace {

bool parse_u32(const std::string& v, uint32_t& out) {
    char* end = nullptr;
    unsigned long x = strtoul(v.c_str(), &end, 10);
    if (end == v.c_str() || *end) return false;
    out = static_cast<uint32_t>(x);
    return true;
}

bool parse_u64(const std::string& v, uint64_t& out) {
    char* end = nullptr;
    unsigned long long x = strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end) return false;
    out = x;
    return true;
}

bool parse_f(const std::string& v, double& out) {
    char* end = nullptr;
    double x = strtod(v.c_str(), &end);
    if (end == v.c_str() || *end) return false;
    out = x;
    return true;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool set_cost(CostParams& c, const std::string& key, const std::string& val) {
    static const std::pair<const char*, OpKind> ops[] = {
        {"read", OpKind::Read},           {"program", OpKind::Program},
        {"partial_program", OpKind::PartialProgram},
        {"erase", OpKind::Erase},         {"pulse", OpKind::Pulse},
        {"downlevel", OpKind::DownLevel}, {"meta", OpKind::Meta},
    };
    for (auto [name, op] : ops) {
        if (key == std::string(name) + "_latency_us")
            return parse_f(val, c.latency_us[static_cast<int>(op)]);
        if (key == std::string(name) + "_energy_uj")
            return parse_f(val, c.energy_uj[static_cast<int>(op)]);
    }
    return false;
}

}  // namespace

std::variant<Config, ConfigError> parse_config(const std::string& text) {
    Config cfg;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        return ConfigError{"line " + std::to_string(lineno) + ": " + msg};
    };
    while (std::getline(in, line)) {
        lineno++;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') return fail("malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "geometry" && section != "cost" &&
                section != "policy" && section != "sim")
                return fail("unknown section '" + section + "'");
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) return fail("expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        bool ok = false;
        if (section == "geometry") {
            Geometry& g = cfg.geometry;
            if (key == "blocks") ok = parse_u32(val, g.blocks);
            else if (key == "pages_per_block") ok = parse_u32(val, g.pages_per_block);
            else if (key == "page_data_bytes") ok = parse_u32(val, g.page_data_bytes);
            else if (key == "page_spare_bytes") ok = parse_u32(val, g.page_spare_bytes);
            else if (key == "erase_limit") ok = parse_u32(val, g.erase_limit);
            else if (key == "partial_program_limit") ok = parse_u32(val, g.partial_program_limit);
            else if (key == "disturb_threshold") ok = parse_u32(val, g.disturb_threshold);
            else return fail("unknown geometry key '" + key + "'");
        } else if (section == "cost") {
            if (!set_cost(cfg.cost, key, val))
                return fail("unknown or malformed cost key '" + key + "'");
            ok = true;
        } else if (section == "policy") {
            PolicyTable& p = cfg.policy;
            if (key == "w_sensitivity") ok = parse_f(val, p.w_sensitivity);
            else if (key == "w_trust") ok = parse_f(val, p.w_trust);
            else if (key == "w_alert") ok = parse_f(val, p.w_alert);
            else if (key == "w_pressure") ok = parse_f(val, p.w_pressure);
            else if (key == "t1") ok = parse_f(val, p.t1);
            else if (key == "t2") ok = parse_f(val, p.t2);
            else if (key == "t3") ok = parse_f(val, p.t3);
            else return fail("unknown policy key '" + key + "'");
        } else if (section == "sim") {
            if (key == "seed") ok = parse_u64(val, cfg.seed);
            else if (key == "op_ratio") ok = parse_f(val, cfg.op_ratio);
            else return fail("unknown sim key '" + key + "'");
        } else {
            return fail("key outside any section");
        }
        if (!ok) return fail("malformed value for '" + key + "'");
    }
    std::string geo_err = cfg.geometry.validate();
    if (!geo_err.empty()) return ConfigError{geo_err};
    if (!cfg.policy.thresholds_valid())
        return ConfigError{"policy thresholds must be strictly increasing"};
    if (cfg.op_ratio < 0 || cfg.op_ratio >= 1)
        return ConfigError{"op_ratio must be in [0,1)"};
    for (int i = 0; i < kOpKinds; ++i)
        if (cfg.cost.latency_us[i] <= 0 || cfg.cost.energy_uj[i] <= 0)
            return ConfigError{"cost constants must be positive"};
    return cfg;
}

std::string save_policy(const PolicyTable& t) {
    std::ostringstream os;
    os << "[policy]\n";
    char buf[64];
    auto emit = [&](const char* k, double v) {
        snprintf(buf, sizeof(buf), "%s=%.9g\n", k, v);
        os << buf;
    };
    emit("w_sensitivity", t.w_sensitivity);
    emit("w_trust", t.w_trust);
    emit("w_alert", t.w_alert);
    emit("w_pressure", t.w_pressure);
    emit("t1", t.t1);
    emit("t2", t.t2);
    emit("t3", t.t3);
    return os.str();
}

}  // namespace apsd
