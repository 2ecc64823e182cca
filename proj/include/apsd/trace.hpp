#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "apsd/delete_engine.hpp"

namespace apsd {

// Line-oriented workload trace:
//   W lpa seed:<u64>|hex:<bytes> [enc]    host write
//   R lpa                                  host read
//   T lpa                                  trim/unmap
//   D lpa PL0..PL3|<technique>|auto        secure delete (omitted -> default)
//   G min_free                             garbage collection
//   X                                      chip dump checkpoint
//   C sens trust alert                     set policy context
// '#' starts a comment; blank lines are skipped.
struct TraceEvent {
    enum class Verb { Write, Read, Trim, Delete, Gc, Dump, Context };
    Verb verb;
    uint32_t line = 0;

    uint32_t lpa = 0;
    // Write
    bool payload_is_seed = true;
    uint64_t payload_seed = 0;
    std::vector<uint8_t> payload_hex;
    bool encrypted = false;
    // Delete
    bool del_auto = false;
    std::optional<PrivacyLevel> del_level;
    std::optional<TechniqueId> del_technique;
    bool del_default = false;  // no spec given; CLI --level-default applies
    // Gc
    uint32_t min_free = 0;
    // Context
    int ctx_sensitivity = 0;
    int ctx_trust = 1;
    bool ctx_alert = false;
};

struct ParseError {
    uint32_t line;
    std::string message;
};

std::variant<std::vector<TraceEvent>, ParseError> parse_trace(const std::string& text);

}  // namespace apsd
