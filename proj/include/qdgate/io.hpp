#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qdgate/experiments.hpp"

// File output. CSV for trajectories (one row per sample, full precision so
// reruns are byte-comparable), JSON for structured results. Key order in
// JSON documents is fixed (ordered_json) for the same reason.

namespace qdgate {

using ojson = nlohmann::ordered_json;

namespace detail {
inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}
} // namespace detail

inline void write_trajectory_csv(const std::string& path, const Trajectory& tr) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "t,P00,P01,P10,P11,norm,n_mean\n";
    for (size_t i = 0; i < tr.t.size(); ++i) {
        out << detail::fmt_double(tr.t[i]) << ',' << detail::fmt_double(tr.p00[i]) << ','
            << detail::fmt_double(tr.p01[i]) << ',' << detail::fmt_double(tr.p10[i]) << ','
            << detail::fmt_double(tr.p11[i]) << ',' << detail::fmt_double(tr.norm[i]) << ','
            << detail::fmt_double(tr.n_mean[i]) << '\n';
    }
}

inline ojson gate_to_json(const GateMatrix& g, double fidelity_vs_sqrtswap) {
    ojson j;
    j["basis"] = {"00", "01", "10", "11"};
    j["photon_sector"] = g.photon_sector;
    j["phase_convention"] = g.phase_convention;
    ojson rows = ojson::array();
    for (int r = 0; r < 4; ++r) {
        ojson row = ojson::array();
        for (int c = 0; c < 4; ++c)
            row.push_back({g.entries(r, c).real(), g.entries(r, c).imag()});
        rows.push_back(row);
    }
    j["entries"] = rows;
    j["unitarity_defect"] = g.unitarity_defect;
    j["fidelity_vs_sqrtswap"] = fidelity_vs_sqrtswap;
    return j;
}

inline ojson fit_to_json(const RabiFit& fit, const std::string& channel) {
    ojson j;
    j["channel"] = channel;
    j["frequency"] = fit.frequency;
    j["amplitude"] = fit.amplitude;
    j["offset"] = fit.offset;
    j["phase"] = fit.phase;
    j["residual"] = fit.residual;
    return j;
}

inline void write_json(const std::string& path, const ojson& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

inline void ensure_dir(const std::string& dir) {
    if (!dir.empty()) std::filesystem::create_directories(dir);
}

inline std::string join_path(const std::string& dir, const std::string& name) {
    if (dir.empty()) return name;
    return (std::filesystem::path(dir) / name).string();
}

} // namespace qdgate
