#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "qdgate/propagator.hpp"

// Closed-form dispersive-regime results and the six-state reduced model.
//
// After adiabatic elimination of the one-photon-exchanged intermediate
// states, the |01,n> <-> |10,n> transition oscillates at
//
//   Omega_eff = (Omega^2/2) [ 1/(Delta+omega_c) - 1/(Delta-omega_c) ]
//
// and the residual populations of the eliminated states peak at p_max_00 /
// p_max_11 below. beta_ratio gives the drive-amplitude ratio that restores
// full transfer amplitude under collinear illumination. All formulas carry a
// pole guard at Delta = +-omega_c.

namespace qdgate {

struct DispersiveParams {
    double Omega = 1.0;  // single-drive amplitude (per-dot quantities)
    double Omega1 = 1.0; // collinear pair
    double Omega2 = 1.0;
    double omega_c = 100.0;
    double Delta = 80.0;
    double alpha = 2.0;
    int n = 0;
};

namespace detail {
inline void pole_guard(double Delta, double omega_c) {
    if (std::abs(Delta - omega_c) < 1e-6 || std::abs(Delta + omega_c) < 1e-6)
        throw std::domain_error("dispersive formula evaluated at the Delta = +-omega_c pole");
}
} // namespace detail

inline double omega_eff_single(double Omega, double Delta, double omega_c) {
    detail::pole_guard(Delta, omega_c);
    return 0.5 * Omega * Omega * (1.0 / (Delta + omega_c) - 1.0 / (Delta - omega_c));
}

inline double p_max_00(double Omega, double Delta, double omega_c, int n) {
    detail::pole_guard(Delta, omega_c);
    if (n < 0) throw std::invalid_argument("p_max_00: n must be >= 0");
    const double sp = Delta + omega_c, sm = Delta - omega_c;
    return 0.25 * Omega * Omega * ((n + 1) / (sp * sp) + n / (sm * sm));
}

inline double p_max_11(double Omega, double Delta, double omega_c, int n) {
    detail::pole_guard(Delta, omega_c);
    if (n < 0) throw std::invalid_argument("p_max_11: n must be >= 0");
    const double sp = Delta + omega_c, sm = Delta - omega_c;
    return 0.25 * Omega * Omega * (n / (sp * sp) + (n + 1) / (sm * sm));
}

inline double beta_ratio(double alpha, double Delta, double omega_c) {
    detail::pole_guard(Delta, omega_c);
    const double g = Delta - omega_c;
    const double num = 1.0 + 1.0 / (alpha - 1.0) + g / (Delta + omega_c) -
                       g / ((alpha + 1.0) * omega_c - (alpha - 1.0) * Delta);
    const double den = 1.0 - 1.0 / (alpha + 1.0) + g / (Delta + omega_c) -
                       g / ((alpha + 1.0) * Delta - (alpha - 1.0) * omega_c);
    if (alpha == 1.0) throw std::domain_error("beta_ratio: alpha = 1 pole");
    if (den == 0.0 || num / den < 0.0)
        throw std::domain_error("beta_ratio: quotient undefined for these parameters");
    return std::sqrt(num / den);
}

inline double omega_eff_collinear(double Omega1, double Omega2, double Delta, double omega_c) {
    detail::pole_guard(Delta, omega_c);
    return 0.5 * Omega1 * Omega2 * (1.0 / (Delta + omega_c) - 1.0 / (Delta - omega_c));
}

// struct-based spellings of the same operations
inline double omega_eff_single(const DispersiveParams& p) {
    return omega_eff_single(p.Omega, p.Delta, p.omega_c);
}
inline double p_max_00(const DispersiveParams& p) { return p_max_00(p.Omega, p.Delta, p.omega_c, p.n); }
inline double p_max_11(const DispersiveParams& p) { return p_max_11(p.Omega, p.Delta, p.omega_c, p.n); }
inline double beta_ratio(const DispersiveParams& p) { return beta_ratio(p.alpha, p.Delta, p.omega_c); }
inline double omega_eff_collinear(const DispersiveParams& p) {
    return omega_eff_collinear(p.Omega1, p.Omega2, p.Delta, p.omega_c);
}

// ---- six-state reduced model ----
//
// Basis {|01,n>, |00,n-1>, |00,n+1>, |11,n-1>, |11,n+1>, |10,n>}; at n = 0
// the n-1 members drop out. The reduced Hamiltonian is the projection of the
// full generator onto this set, which makes the reduced evolution an
// independent oracle for the full propagator (and vice versa).

inline std::vector<BasisIndex> six_state_basis(int n) {
    if (n < 0) throw std::invalid_argument("six_state_basis: n must be >= 0");
    std::vector<BasisIndex> keep;
    keep.push_back({0, 1, n});
    if (n >= 1) keep.push_back({0, 0, n - 1});
    keep.push_back({0, 0, n + 1});
    if (n >= 1) keep.push_back({1, 1, n - 1});
    keep.push_back({1, 1, n + 1});
    keep.push_back({1, 0, n});
    return keep;
}

namespace detail {
// Restrict a TermSet to a subset of basis states (entries with both ends in
// the subset survive, reindexed).
inline TermSet project_terms(const TermSet& T, const std::vector<int>& keep) {
    std::vector<int> map(T.d, -1);
    for (size_t i = 0; i < keep.size(); ++i) map[keep[i]] = int(i);
    TermSet R;
    R.d = int(keep.size());
    R.diag = Eigen::VectorXd::Zero(R.d);
    for (size_t i = 0; i < keep.size(); ++i) R.diag[i] = T.diag[keep[i]];
    for (const auto& ch : T.channels) {
        DriveChannel pc;
        pc.oscs = ch.oscs;
        for (const auto& e : ch.entries)
            if (map[e.row] >= 0 && map[e.col] >= 0)
                pc.entries.push_back({map[e.row], map[e.col], e.val});
        if (!pc.entries.empty()) R.channels.push_back(std::move(pc));
    }
    R.f_max = T.f_max;
    return R;
}
} // namespace detail

// Evolve the reduced model from |q1q2,n> (taken from cfg.initial(); its n
// selects the sector). Populations are reported per (q1,q2) class like the
// full propagator, so trajectories are directly comparable.
inline Trajectory reduced_six_state_evolve(const SystemConfig& cfg, int n,
                                           const TimeGrid& grid, double norm_tol = 1e-8,
                                           const detail::StepHook& extra_hook = {}) {
    validate(cfg);
    if (cfg.scheme != Scheme::two)
        throw std::invalid_argument("reduced_six_state_evolve: defined for scheme 2");
    const int n_max = cfg.nmax_eff();
    if (n + 1 > n_max)
        throw std::invalid_argument("reduced_six_state_evolve: n+1 exceeds n_max");

    const auto labels = six_state_basis(n);
    std::vector<int> keep;
    for (const auto& b : labels) keep.push_back(index_of(b, n_max));
    const TermSet R = detail::project_terms(build_terms(cfg), keep);

    Mat psi = Mat::Zero(R.d, 1);
    {
        const BasisIndex b0 = cfg.initial();
        bool found = false;
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i].q1 == b0.q1 && labels[i].q2 == b0.q2 && labels[i].n == b0.n) {
                psi(int(i), 0) = 1.0;
                found = true;
            }
        if (!found)
            throw std::invalid_argument(
                "reduced_six_state_evolve: initial state outside the reduced basis");
    }

    double dt = 0.0;
    const int nsteps = detail::plan_steps(grid, R.f_max, dt);
    const int stride = detail::sample_stride(grid, nsteps);

    Trajectory traj;
    traj.norm_drift = detail::integrate(
        cfg, R, psi, grid, norm_tol, [&](const Mat& s, double t, int step) {
            if (step % stride == 0 || step == nsteps) record_sample(traj, s.col(0), labels, t);
            if (extra_hook) extra_hook(s, t, step);
        });
    return traj;
}

} // namespace qdgate
