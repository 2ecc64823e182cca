#include "apsd/trace.hpp"

#include <cstdlib>
#include <sstream>

namespace apsd {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

bool to_u32(const std::string& s, uint32_t& out) {
    char* end = nullptr;
    unsigned long v = strtoul(s.c_str(), &end, 10);
    if (end == s.c_str() || *end) return false;
    out = static_cast<uint32_t>(v);
    return true;
}

bool to_u64(const std::string& s, uint64_t& out) {
    char* end = nullptr;
    unsigned long long v = strtoull(s.c_str(), &end, 10);
    if (end == s.c_str() || *end) return false;
    out = v;
    return true;
}

bool from_hex(const std::string& s, std::vector<uint8_t>& out) {
    if (s.size() % 2) return false;
    out.clear();
    for (size_t i = 0; i < s.size(); i += 2) {
        auto nib = [](char c) -> int {
            if (c >= '0' && c <= '9') return c - '0';
            if (c >= 'a' && c <= 'f') return c - 'a' + 10;
            if (c >= 'A' && c <= 'F') return c - 'A' + 10;
            return -1;
        };
        int hi = nib(s[i]), lo = nib(s[i + 1]);
        if (hi < 0 || lo < 0) return false;
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return true;
}

}  // namespace

std::variant<std::vector<TraceEvent>, ParseError> parse_trace(const std::string& text) {
    std::vector<TraceEvent> events;
    std::istringstream in(text);
    std::string line;
    uint32_t lineno = 0;
    auto fail = [&](const std::string& msg) { return ParseError{lineno, msg}; };

    while (std::getline(in, line)) {
        lineno++;
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        TraceEvent ev;
        ev.line = lineno;
        const std::string& verb = toks[0];
        if (verb == "W") {
            if (toks.size() < 3 || toks.size() > 4) return fail("W lpa payload [enc]");
            ev.verb = TraceEvent::Verb::Write;
            if (!to_u32(toks[1], ev.lpa)) return fail("bad lpa");
            const std::string& pay = toks[2];
            if (pay.rfind("seed:", 0) == 0) {
                ev.payload_is_seed = true;
                if (!to_u64(pay.substr(5), ev.payload_seed)) return fail("bad seed payload");
            } else if (pay.rfind("hex:", 0) == 0) {
                ev.payload_is_seed = false;
                if (!from_hex(pay.substr(4), ev.payload_hex)) return fail("bad hex payload");
            } else {
                return fail("payload must be seed:<u64> or hex:<bytes>");
            }
            if (toks.size() == 4) {
                if (toks[3] != "enc") return fail("trailing token must be 'enc'");
                ev.encrypted = true;
            }
        } else if (verb == "R" || verb == "T") {
            if (toks.size() != 2) return fail(verb + " lpa");
            ev.verb = verb == "R" ? TraceEvent::Verb::Read : TraceEvent::Verb::Trim;
            if (!to_u32(toks[1], ev.lpa)) return fail("bad lpa");
        } else if (verb == "D") {
            if (toks.size() < 2 || toks.size() > 3) return fail("D lpa [level-or-technique]");
            ev.verb = TraceEvent::Verb::Delete;
            if (!to_u32(toks[1], ev.lpa)) return fail("bad lpa");
            if (toks.size() == 2) {
                ev.del_default = true;
            } else if (toks[2] == "auto") {
                ev.del_auto = true;
            } else if (auto lvl = parse_level(toks[2])) {
                ev.del_level = lvl;
            } else if (auto tech = parse_technique(toks[2])) {
                ev.del_technique = tech;
            } else {
                return fail("unknown level or technique '" + toks[2] + "'");
            }
        } else if (verb == "G") {
            if (toks.size() != 2) return fail("G min_free");
            ev.verb = TraceEvent::Verb::Gc;
            if (!to_u32(toks[1], ev.min_free)) return fail("bad min_free");
        } else if (verb == "X") {
            if (toks.size() != 1) return fail("X takes no arguments");
            ev.verb = TraceEvent::Verb::Dump;
        } else if (verb == "C") {
            if (toks.size() != 4) return fail("C sens trust alert");
            ev.verb = TraceEvent::Verb::Context;
            uint32_t sens, trust, alert;
            if (!to_u32(toks[1], sens) || sens > 3) return fail("sensitivity must be 0..3");
            if (!to_u32(toks[2], trust) || trust > 2) return fail("trust must be 0..2");
            if (!to_u32(toks[3], alert) || alert > 1) return fail("alert must be 0 or 1");
            ev.ctx_sensitivity = static_cast<int>(sens);
            ev.ctx_trust = static_cast<int>(trust);
            ev.ctx_alert = alert != 0;
        } else {
            return fail("unknown verb '" + verb + "'");
        }
        events.push_back(std::move(ev));
    }
    return events;
}

}  // namespace apsd
