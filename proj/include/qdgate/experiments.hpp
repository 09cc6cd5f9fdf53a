#pragma once

#include <string>
#include <vector>

#include "qdgate/analytic.hpp"
#include "qdgate/fit.hpp"

// Gate tomography, phase fixing, fidelity, and pulse-width calibration.

namespace qdgate {

struct GateMatrix {
    Eigen::Matrix4cd entries; // rows/cols ordered |00>, |01>, |10>, |11>
    int photon_sector = 0;
    std::string phase_convention = "raw";
    double unitarity_defect = 0.0;
};

inline Eigen::Matrix4cd sqrtswap_canonical() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    const cplx p = cplx(0.5, 0.5), q = cplx(0.5, -0.5);
    m(0, 0) = 1.0;
    m(1, 1) = p;
    m(1, 2) = q;
    m(2, 1) = q;
    m(2, 2) = p;
    m(3, 3) = 1.0;
    return m;
}

// Reference matrix for the pulsed protocol at tau = 16.8763 as published for
// this scheme. Its corners are idealized (exactly 1): they carry no trace of
// the second-order light shifts the full dynamics imprints on |00> and |11>,
// which is the signature of a reduced-model tomography (those corner states
// are not dynamical there). The center block encodes an XY rotation of angle
// theta = 1.5629 times a residual phase e^{i 0.7893} on the retained pair.
inline Eigen::Matrix4cd sqrtswap_reference() {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(0, 0) = 1.0;
    m(1, 1) = cplx(0.5, 0.5039);
    m(1, 2) = cplx(0.5, -0.4961);
    m(2, 1) = cplx(0.5, -0.4961);
    m(2, 2) = cplx(0.5, 0.5039);
    m(3, 3) = 1.0;
    return m;
}

// Propagate the four computational kets |q1 q2, n> over the pulse window and
// read the same-n computational block. Leakage out of that block is never
// renormalized away; it shows up in the unitarity defect.
inline GateMatrix gate_tomography(const SystemConfig& cfg, const TimeGrid& grid, int n,
                                  double norm_tol = 1e-8) {
    validate(cfg);
    const int n_max = cfg.nmax_eff();
    if (n > n_max) throw std::invalid_argument("gate_tomography: photon sector above n_max");
    const TermSet T = build_terms(cfg);

    Mat psi = Mat::Zero(T.d, 4);
    const int order[4][2] = {{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    for (int c = 0; c < 4; ++c)
        psi(index_of({order[c][0], order[c][1], n}, n_max), c) = 1.0;

    detail::integrate(cfg, T, psi, grid, norm_tol);

    GateMatrix g;
    g.photon_sector = n;
    g.phase_convention = "raw";
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            g.entries(r, c) = psi(index_of({order[r][0], order[r][1], n}, n_max), c);
    g.unitarity_defect = (g.entries.adjoint() * g.entries - Eigen::Matrix4cd::Identity())
                             .cwiseAbs()
                             .maxCoeff();
    return g;
}

// Remove the global phase: rotate so the |00> diagonal entry is real and
// nonnegative. If that entry vanishes the largest-magnitude diagonal entry
// serves as the reference, recorded in the convention tag.
inline GateMatrix phase_fix(GateMatrix g) {
    int ref = 0;
    if (std::abs(g.entries(0, 0)) < 1e-12) {
        for (int i = 1; i < 4; ++i)
            if (std::abs(g.entries(i, i)) > std::abs(g.entries(ref, ref))) ref = i;
        if (std::abs(g.entries(ref, ref)) < 1e-12)
            throw numerical_failure("phase_fix: all diagonal entries vanish");
        g.phase_convention = "global:ref=" + std::to_string(ref) + std::to_string(ref);
    } else {
        g.phase_convention = "global:ref=00";
    }
    const double a = std::arg(g.entries(ref, ref));
    g.entries *= std::polar(1.0, -a);
    // the reference entry is now real up to rounding; pin it exactly
    g.entries(ref, ref) = cplx(std::abs(g.entries(ref, ref)), 0.0);
    return g;
}

inline double gate_fidelity(const GateMatrix& g, const Eigen::Matrix4cd& target) {
    return std::abs((target.adjoint() * g.entries).trace()) / 4.0;
}

// ---- max-population scan (leakage maxima vs detuning gap) ----

struct ScanRow {
    double gap = 0.0; // omega_c - Delta
    double p00_max = 0.0, p11_max = 0.0;
    double p00_pred = 0.0, p11_pred = 0.0; // closed-form maxima
};

// For each gap, run the CW trajectory and record the exact running maxima of
// P00 and P11 over every accepted step (output decimation would undersample
// the fast leakage oscillation).
inline std::vector<ScanRow> max_population_scan(const SystemConfig& base,
                                                const std::vector<double>& gaps,
                                                double periods = 1.6, double ramp_time = 50.0,
                                                double norm_tol = 1e-8) {
    std::vector<ScanRow> rows;
    for (size_t gi = 0; gi < gaps.size(); ++gi) {
        SystemConfig cfg = base;
        cfg.Delta = cfg.omega_c - gaps[gi];
        const double om = std::abs(omega_eff_single(cfg.coupling[0][0] *
                                                        std::abs(cfg.lasers[0].envelope.peak),
                                                    cfg.Delta, cfg.omega_c));
        TimeGrid grid{0.0, ramp_time + periods * 2.0 * std::numbers::pi / om, 0.0, 2000};

        double m00 = 0.0, m11 = 0.0;
        const int n_max = cfg.nmax_eff();
        const int block = n_max + 1;
        StateVector psi0 = StateVector::basis_state(cfg.initial(), n_max);
        try {
            propagate_state(cfg, psi0, grid, norm_tol,
                            [&](const Mat& s, double, int) {
                                double p00 = 0.0, p11 = 0.0;
                                for (int nn = 0; nn < block; ++nn) {
                                    p00 += std::norm(s(nn, 0));
                                    p11 += std::norm(s(3 * block + nn, 0));
                                }
                                m00 = std::max(m00, p00);
                                m11 = std::max(m11, p11);
                            });
        } catch (const std::exception& e) {
            throw integration_failure("max_population_scan: sweep index " +
                                          std::to_string(gi) + " failed: " + e.what(),
                                      0.0);
        }
        const double W = cfg.coupling[0][0] * std::abs(cfg.lasers[0].envelope.peak);
        rows.push_back({gaps[gi], m00, m11, p_max_00(W, cfg.Delta, cfg.omega_c, cfg.n_init),
                        p_max_11(W, cfg.Delta, cfg.omega_c, cfg.n_init)});
    }
    return rows;
}

// ---- pulse-width calibration ----

struct CalibrationResult {
    double tau_star = 0.0;
    double fidelity = 0.0;
    int evaluations = 0;
};

struct PulsedGateSetup {
    double beta = 1.0;       // drive amplitude ratio, laser 2 over laser 1
    double phase2 = std::numbers::pi;
    int n_sector = 0;
    double norm_tol = 1e-8;
};

// Gaussian-pulse config for a given tau: center t0 = 5 tau, window [0, 10
// tau] (envelope tails below e^{-12.5} at the edges).
inline SystemConfig pulsed_config(SystemConfig base, double tau, const PulsedGateSetup& s) {
    base.lasers[0].envelope = Envelope::gaussian(1.0, 5.0 * tau, tau);
    base.lasers[1].envelope = Envelope::gaussian(s.beta, 5.0 * tau, tau,
                                                 std::polar(1.0, s.phase2));
    base.n_init = s.n_sector;
    return base;
}

inline TimeGrid pulsed_grid(double tau, int samples = 2000) {
    return {0.0, 10.0 * tau, 0.0, samples};
}

inline double pulsed_gate_fidelity(const SystemConfig& base, double tau,
                                   const PulsedGateSetup& s) {
    const SystemConfig cfg = pulsed_config(base, tau, s);
    const GateMatrix g = phase_fix(gate_tomography(cfg, pulsed_grid(tau), s.n_sector, s.norm_tol));
    return gate_fidelity(g, sqrtswap_canonical());
}

// Maximize the fidelity against the canonical target over tau. A five-point
// scan of the bracket locates a candidate interior maximum, which
// golden-section then refines to |dtau| <= tol. A landscape that slopes into
// a bracket endpoint has no interior maximum to refine; that is reported as
// calibration_failure carrying the endpoint fidelities.
inline CalibrationResult calibrate_tau(const SystemConfig& base, double tau_lo, double tau_hi,
                                       const PulsedGateSetup& s, double tol = 1e-3) {
    if (!(tau_hi > tau_lo) || tau_lo <= 0)
        throw std::invalid_argument("calibrate_tau: bad bracket");
    int evals = 0;
    auto F = [&](double tau) {
        ++evals;
        return pulsed_gate_fidelity(base, tau, s);
    };

    const int NS = 5;
    double ts[NS], fs[NS];
    for (int i = 0; i < NS; ++i) {
        ts[i] = tau_lo + (tau_hi - tau_lo) * i / (NS - 1);
        fs[i] = F(ts[i]);
    }
    int best = 0;
    for (int i = 1; i < NS; ++i)
        if (fs[i] > fs[best]) best = i;
    if (best == 0 || best == NS - 1)
        throw calibration_failure("calibrate_tau: no interior maximum in bracket", fs[0],
                                  fs[NS - 1]);

    double a = ts[best - 1], b = ts[best + 1];
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = F(c1), f2 = F(c2);
    while (b - a > tol) {
        if (f1 > f2) { // keep the higher side (maximization)
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = F(c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = F(c2);
        }
    }
    CalibrationResult r;
    r.tau_star = 0.5 * (a + b);
    r.fidelity = F(r.tau_star);
    r.evaluations = evals;
    return r;
}

} // namespace qdgate
