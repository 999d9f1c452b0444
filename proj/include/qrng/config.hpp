#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "qrng/params.hpp"

namespace qrng {

// Line-based `key = value` configuration files. `#` starts a comment, blank
// lines are ignored, unknown keys are rejected. Serialization uses 17
// significant digits so every double round-trips exactly.

namespace detail {

inline std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const auto begin = s.find_first_not_of(ws);
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(ws);
    return s.substr(begin, end - begin + 1);
}

inline double parse_double(const std::string& value, int line_no) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0')
        throw ParseError("line " + std::to_string(line_no) + ": non-numeric value '" + value + "'");
    return v;
}

inline std::uint64_t parse_u64(const std::string& value, int line_no) {
    char* end = nullptr;
    if (!value.empty() && value[0] == '-')
        throw ParseError("line " + std::to_string(line_no) + ": negative value '" + value + "'");
    const std::uint64_t v = std::strtoull(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ParseError("line " + std::to_string(line_no) + ": non-integer value '" + value + "'");
    return v;
}

inline int parse_int(const std::string& value, int line_no) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0')
        throw ParseError("line " + std::to_string(line_no) + ": non-integer value '" + value + "'");
    return static_cast<int>(v);
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// Applies `key = value` to `config`. Throws ParseError on unknown keys.
inline void apply_config_key(Config& config, const std::string& key, const std::string& value,
                             int line_no) {
    using detail::parse_double;
    using detail::parse_int;
    using detail::parse_u64;

    if (key == "laser.power")
        config.laser.power = parse_double(value, line_no);
    else if (key == "laser.coherence_time")
        config.laser.coherence_time = parse_double(value, line_no);
    else if (key == "laser.classical_phase_variance")
        config.laser.classical_phase_variance = parse_double(value, line_no);
    else if (key == "chain.delay")
        config.chain.delay = parse_double(value, line_no);
    else if (key == "chain.sampling_interval")
        config.chain.sampling_interval = parse_double(value, line_no);
    else if (key == "chain.gain")
        config.chain.gain = parse_double(value, line_no);
    else if (key == "chain.response_time")
        config.chain.response_time = parse_double(value, line_no);
    else if (key == "adc.bits")
        config.adc.bits = parse_int(value, line_no);
    else if (key == "adc.v_min")
        config.adc.v_min = parse_double(value, line_no);
    else if (key == "adc.v_max")
        config.adc.v_max = parse_double(value, line_no);
    else if (key == "adc.offset")
        config.adc.offset = parse_double(value, line_no);
    else if (key == "sim.seed")
        config.sim.seed = parse_u64(value, line_no);
    else if (key == "sim.step_dt")
        config.sim.step_dt = parse_double(value, line_no);
    else if (key == "sim.duration")
        config.sim.duration = parse_double(value, line_no);
    else if (key == "sim.trajectories")
        config.sim.trajectories = parse_int(value, line_no);
    else
        throw ParseError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
}

// Parses a config stream on top of `base` (later keys win). Does not validate;
// call validate() on the result.
inline Config parse_config(std::istream& in, Config base = Config{}) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(line_no) + ": empty key");
        apply_config_key(base, key, value, line_no);
    }
    return base;
}

inline Config parse_config_string(const std::string& text, Config base = Config{}) {
    std::istringstream in(text);
    return parse_config(in, base);
}

inline Config load_config_file(const std::string& path, Config base = Config{}) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    return parse_config(in, base);
}

inline std::string serialize_config(const Config& c) {
    using detail::format_double;
    std::ostringstream out;
    out << "laser.power = " << format_double(c.laser.power) << "\n"
        << "laser.coherence_time = " << format_double(c.laser.coherence_time) << "\n"
        << "laser.classical_phase_variance = " << format_double(c.laser.classical_phase_variance)
        << "\n"
        << "chain.delay = " << format_double(c.chain.delay) << "\n"
        << "chain.sampling_interval = " << format_double(c.chain.sampling_interval) << "\n"
        << "chain.gain = " << format_double(c.chain.gain) << "\n"
        << "chain.response_time = " << format_double(c.chain.response_time) << "\n"
        << "adc.bits = " << c.adc.bits << "\n"
        << "adc.v_min = " << format_double(c.adc.v_min) << "\n"
        << "adc.v_max = " << format_double(c.adc.v_max) << "\n"
        << "adc.offset = " << format_double(c.adc.offset) << "\n"
        << "sim.seed = " << c.sim.seed << "\n"
        << "sim.step_dt = " << format_double(c.sim.step_dt) << "\n"
        << "sim.duration = " << format_double(c.sim.duration) << "\n"
        << "sim.trajectories = " << c.sim.trajectories << "\n";
    return out.str();
}

}  // namespace qrng
