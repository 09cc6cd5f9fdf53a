#pragma once

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "qdgate/model.hpp"
#include "qdgate/propagator.hpp"

// INI-style run configuration. Flat sections [system], [lasers], [grid],
// [output]; '#' and ';' start comments. Every key must be known (typos are
// rejected, not silently defaulted) and the assembled SystemConfig passes
// the physical validation before any computation runs.

namespace qdgate {

struct RunConfig {
    SystemConfig system;
    TimeGrid grid{0.0, 0.0, 0.0, 2000};
    double norm_tol = 1e-8;
    std::string output_dir;
};

struct config_parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct unknown_key_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw config_parse_error("key '" + key + "': not a number: '" + v + "'");
    }
    if (pos != v.size())
        throw config_parse_error("key '" + key + "': trailing junk in '" + v + "'");
    return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
    size_t pos = 0;
    long x = 0;
    try {
        x = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw config_parse_error("key '" + key + "': not an integer: '" + v + "'");
    }
    if (pos != v.size())
        throw config_parse_error("key '" + key + "': trailing junk in '" + v + "'");
    return static_cast<int>(x);
}

inline void apply_system_key(SystemConfig& sys, const std::string& key,
                             const std::string& v) {
    if (key == "model") {
        if (v == "collinear") sys.model = Model::collinear;
        else if (v == "per-dot" || v == "per_dot") sys.model = Model::per_dot;
        else if (v == "lab") sys.model = Model::lab;
        else throw config_parse_error("key 'model': expected collinear|per-dot|lab, got '" + v + "'");
    } else if (key == "scheme") {
        const int s = parse_int(key, v);
        if (s == 1) sys.scheme = Scheme::one;
        else if (s == 2) sys.scheme = Scheme::two;
        else throw config_parse_error("key 'scheme': expected 1 or 2, got '" + v + "'");
    } else if (key == "omega_c") sys.omega_c = parse_double(key, v);
    else if (key == "Delta") sys.Delta = parse_double(key, v);
    else if (key == "alpha") sys.alpha = parse_double(key, v);
    else if (key == "n_init") sys.n_init = parse_int(key, v);
    else if (key == "q1_init") sys.q1_init = parse_int(key, v);
    else if (key == "q2_init") sys.q2_init = parse_int(key, v);
    else if (key == "n_max") sys.n_max = parse_int(key, v);
    else if (key == "lab_omega11") sys.lab_omega11 = parse_double(key, v);
    else if (key == "coupling_11") sys.coupling[0][0] = parse_double(key, v);
    else if (key == "coupling_12") sys.coupling[0][1] = parse_double(key, v);
    else if (key == "coupling_21") sys.coupling[1][0] = parse_double(key, v);
    else if (key == "coupling_22") sys.coupling[1][1] = parse_double(key, v);
    else throw unknown_key_error("unknown key in [system]: '" + key + "'");
}

inline void apply_laser_key(SystemConfig& sys, const std::string& key,
                            const std::string& v) {
    // Per-laser keys carry a trailing 1 or 2.
    if (key.size() < 2) throw unknown_key_error("unknown key in [lasers]: '" + key + "'");
    const char last = key.back();
    if (last != '1' && last != '2')
        throw unknown_key_error("unknown key in [lasers]: '" + key + "'");
    const int k = last - '1';
    const std::string stem = key.substr(0, key.size() - 1);
    LaserParams& L = sys.lasers[k];
    if (stem == "env") {
        if (v == "ramp" || v == "constant-ramp") L.envelope.shape = Envelope::Shape::constant_ramp;
        else if (v == "gaussian") L.envelope.shape = Envelope::Shape::gaussian;
        else throw config_parse_error("key '" + key + "': expected ramp|gaussian, got '" + v + "'");
    } else if (stem == "peak") L.envelope.peak = parse_double(key, v);
    else if (stem == "ramp_time") L.envelope.ramp_time = parse_double(key, v);
    else if (stem == "t0") L.envelope.t0 = parse_double(key, v);
    else if (stem == "tau") L.envelope.tau = parse_double(key, v);
    else if (stem == "phase") L.phase = parse_double(key, v);
    else throw unknown_key_error("unknown key in [lasers]: '" + key + "'");
}

inline void apply_grid_key(RunConfig& rc, const std::string& key, const std::string& v) {
    if (key == "t_start") rc.grid.t_start = parse_double(key, v);
    else if (key == "t_end") rc.grid.t_end = parse_double(key, v);
    else if (key == "dt_max") rc.grid.dt_max = parse_double(key, v);
    else if (key == "samples") rc.grid.samples = parse_int(key, v);
    else if (key == "norm_tol") rc.norm_tol = parse_double(key, v);
    else throw unknown_key_error("unknown key in [grid]: '" + key + "'");
}

inline void apply_output_key(RunConfig& rc, const std::string& key, const std::string& v) {
    if (key == "dir") rc.output_dir = v;
    else throw unknown_key_error("unknown key in [output]: '" + key + "'");
}

} // namespace detail

// Default output directory: [output] dir > QDGATE_OUT > "./qdgate_out".
inline std::string default_output_dir() {
    if (const char* env = std::getenv("QDGATE_OUT"); env && *env) return env;
    return "qdgate_out";
}

inline RunConfig parse_config_text(std::istream& in, const std::string& origin) {
    RunConfig rc;
    std::string section;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (size_t c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
        line = detail::trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_parse_error(where + ": unterminated section header");
            section = detail::trim(line.substr(1, line.size() - 2));
            if (section != "system" && section != "lasers" && section != "grid" &&
                section != "output")
                throw unknown_key_error(where + ": unknown section [" + section + "]");
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_parse_error(where + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty()) throw config_parse_error(where + ": empty key");
        if (section.empty())
            throw config_parse_error(where + ": key outside any section");
        try {
            if (section == "system") detail::apply_system_key(rc.system, key, val);
            else if (section == "lasers") detail::apply_laser_key(rc.system, key, val);
            else if (section == "grid") detail::apply_grid_key(rc, key, val);
            else detail::apply_output_key(rc, key, val);
        } catch (const unknown_key_error& e) {
            throw unknown_key_error(where + ": " + e.what());
        } catch (const config_parse_error& e) {
            throw config_parse_error(where + ": " + e.what());
        }
    }
    if (rc.output_dir.empty()) rc.output_dir = default_output_dir();
    return rc;
}

inline RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not found: " + path);
    RunConfig rc = parse_config_text(in, path);
    validate(rc.system); // throws std::invalid_argument naming the field
    return rc;
}

} // namespace qdgate

// Exit-code contract shared by the CLI and its tests.
namespace qdgate::exitcode {
inline constexpr int ok = 0;
inline constexpr int usage = 2;      // bad invocation, missing config file
inline constexpr int validation = 3; // physical constraint violated
inline constexpr int numerical = 4;  // integration/extraction/calibration failure
inline constexpr int parse = 5;      // malformed config text
inline constexpr int unknown_key = 6;
} // namespace qdgate::exitcode
