#pragma once

// Report stream: JSON lines (header, one line per check, summary) or CSV.

#include <chrono>
#include <ctime>
#include <ostream>
#include <string>

#include "json.hpp"

#include "spectral_forge/suites.hpp"

namespace spectral_forge::report {

using nlohmann::ordered_json;
using suites::SuiteReport;

struct Format {
    bool csv = false;
    bool timestamp = true;
};

inline ordered_json value_json(const suites::Value& v) {
    if (v.is_complex) return ordered_json::array({v.value.real(), v.value.imag()});
    return v.value.real();
}

inline std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

inline std::string csv_field(std::string s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

/// Extra records (e.g. a character dump) go between the header and the checks.
inline void write(std::ostream& os, const SuiteReport& rep, const Format& fmt,
                  const std::vector<ordered_json>& records = {}) {
    if (fmt.csv) {
        os << "suite,check,pass,error,tolerance,values\n";
        for (const auto& c : rep.checks) {
            std::string vals;
            for (const auto& v : c.values) vals += (vals.empty() ? "" : ";") + v.name + "=" + suites::fmt(v.value);
            os << csv_field(rep.suite) << ',' << csv_field(c.name) << ',' << (c.pass ? "true" : "false") << ','
               << suites::fmt(c.error) << ',' << suites::fmt(c.tolerance) << ',' << csv_field(vals) << '\n';
        }
        return;
    }
    ordered_json header{{"type", "header"}, {"suite", rep.suite}};
    ordered_json params = ordered_json::object();
    for (const auto& [k, v] : rep.parameters) params[k] = v;
    header["parameters"] = params;
    if (fmt.timestamp) header["timestamp"] = utc_now();
    os << header.dump() << '\n';
    for (const auto& r : records) os << r.dump() << '\n';
    for (const auto& c : rep.checks) {
        ordered_json line{{"type", "check"}, {"suite", rep.suite}, {"name", c.name}};
        ordered_json vals = ordered_json::object();
        for (const auto& v : c.values) vals[v.name] = value_json(v);
        line["values"] = vals;
        line["error"] = c.error;
        line["tolerance"] = c.tolerance;
        line["pass"] = c.pass;
        os << line.dump() << '\n';
    }
    ordered_json summary{{"type", "summary"},
                         {"suite", rep.suite},
                         {"checks", rep.checks.size()},
                         {"failed", rep.failures()},
                         {"pass", rep.all_pass()}};
    if (fmt.timestamp) summary["wall_seconds"] = rep.wall_seconds;
    os << summary.dump() << '\n';
}

}  // namespace spectral_forge::report
