#pragma once

#include <string>
#include <variant>

#include "apsd/geometry.hpp"
#include "apsd/metrics.hpp"
#include "apsd/policy.hpp"

namespace apsd {

struct Config {
    Geometry geometry;
    CostParams cost;
    PolicyTable policy;
    uint64_t seed = 1;
    double op_ratio = 0.07;
};

struct ConfigError {
    std::string message;
};

// key=value text with [geometry] [cost] [policy] [sim] sections.
// Unknown sections or keys are rejected.
std::variant<Config, ConfigError> parse_config(const std::string& text);
std::string save_policy(const PolicyTable& table);

}  // namespace apsd
