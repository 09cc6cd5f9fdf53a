#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdgate/io.hpp"

// Pinned reproduction runs. Each scenario fixes the parameter set of one
// published result and returns the measured quantities next to the
// closed-form predictions; when an output directory is given it also writes
// the CSV/JSON artifacts. Windows are chosen to cover the needed number of
// effective Rabi periods after the drive ramp.

namespace qdgate {

inline SystemConfig cw_config(Model model, double omega_c, double Delta, double alpha,
                              int n_init, int q1, int q2, double beta2 = 1.0,
                              double ramp_time = 50.0) {
    SystemConfig cfg;
    cfg.model = model;
    cfg.scheme = Scheme::two;
    cfg.omega_c = omega_c;
    cfg.Delta = Delta;
    cfg.alpha = alpha;
    cfg.n_init = n_init;
    cfg.q1_init = q1;
    cfg.q2_init = q2;
    cfg.lasers[0].envelope = Envelope::ramp(1.0, ramp_time);
    cfg.lasers[1].envelope = Envelope::ramp(beta2, ramp_time);
    return cfg;
}

// ---- effective-Rabi-frequency families ----

struct Fig2Point {
    double omega_c = 0.0, gap = 0.0;
    RabiFit fit;
    double predicted = 0.0;
    double rel_err = 0.0;
};

// One CW run of the per-dot model starting in |01,n>, fitting the P10
// oscillation after the ramp. The photon sector defaults to the vacuum: the
// dispersive guard sqrt(n+1)*Omega/(omega_c-Delta) at the gap-10 family edge
// already saturates at n = 0, and higher sectors pick up visible
// fourth-order corrections.
inline Fig2Point rabi_point(double omega_c, double gap, int n = 0,
                            double norm_tol = 1e-8) {
    const double Delta = omega_c - gap;
    SystemConfig cfg = cw_config(Model::per_dot, omega_c, Delta, 2.0, n, 0, 1);
    const double om = std::abs(omega_eff_single(1.0, Delta, omega_c));
    const double ramp = 50.0;
    TimeGrid grid{0.0, ramp + 2.2 * 2.0 * std::numbers::pi / om, 0.0, 2000};
    StateVector psi0 = StateVector::basis_state(cfg.initial(), cfg.nmax_eff());
    const Trajectory tr = propagate_state(cfg, psi0, grid, norm_tol);

    Fig2Point pt;
    pt.omega_c = omega_c;
    pt.gap = gap;
    pt.fit = extract_rabi_frequency(tr, Channel::p10, ramp);
    pt.predicted = om;
    pt.rel_err = std::abs(pt.fit.frequency - om) / om;
    return pt;
}

struct Fig2Result {
    std::vector<Fig2Point> points;
};

inline Fig2Result run_fig2(const std::string& outdir = "") {
    Fig2Result res;
    for (double wc : {60.0, 80.0, 100.0, 140.0})
        for (double gap : {10.0, 15.0}) res.points.push_back(rabi_point(wc, gap));
    if (!outdir.empty()) {
        ensure_dir(outdir);
        ojson j = ojson::array();
        for (const auto& p : res.points) {
            ojson e = fit_to_json(p.fit, "P10");
            e["omega_c"] = p.omega_c;
            e["gap"] = p.gap;
            e["predicted"] = p.predicted;
            e["rel_err"] = p.rel_err;
            j.push_back(e);
        }
        write_json(join_path(outdir, "fig2_fits.json"), j);
    }
    return res;
}

// ---- leakage maxima scan ----

struct Fig3Result {
    std::vector<ScanRow> rows;
};

inline Fig3Result run_fig3(const std::string& outdir = "") {
    SystemConfig base = cw_config(Model::per_dot, 100.0, 80.0, 2.0, 2, 0, 1);
    Fig3Result res{max_population_scan(base, {10.0, 15.0, 20.0, 25.0, 30.0})};
    if (!outdir.empty()) {
        ensure_dir(outdir);
        std::ofstream out(join_path(outdir, "fig3_scan.csv"));
        out << "gap,P00_max,P11_max,P00_pred,P11_pred\n";
        for (const auto& r : res.rows)
            out << detail::fmt_double(r.gap) << ',' << detail::fmt_double(r.p00_max) << ','
                << detail::fmt_double(r.p11_max) << ',' << detail::fmt_double(r.p00_pred)
                << ',' << detail::fmt_double(r.p11_pred) << '\n';
    }
    return res;
}

// ---- collinear CW transfer, without and with the amplitude correction ----

struct CwTransferResult {
    Trajectory traj;
    double p00_max = 0.0, p11_max = 0.0, p10_max = 0.0, p01_min = 1.0;
    double beta2 = 1.0;
};

inline CwTransferResult run_collinear_cw(double beta2, const std::string& outdir = "",
                                         const std::string& csv_name = "",
                                         double norm_tol = 1e-8) {
    SystemConfig cfg = cw_config(Model::collinear, 100.0, 80.0, 2.0, 2, 0, 1, beta2);
    const double om = std::abs(omega_eff_collinear(1.0, beta2, 80.0, 100.0));
    TimeGrid grid{0.0, 50.0 + 1.8 * 2.0 * std::numbers::pi / om, 0.0, 2000};
    StateVector psi0 = StateVector::basis_state(cfg.initial(), cfg.nmax_eff());

    CwTransferResult res;
    res.beta2 = beta2;
    const int block = cfg.nmax_eff() + 1;
    res.traj = propagate_state(cfg, psi0, grid, norm_tol, [&](const Mat& s, double, int) {
        double p[4] = {0, 0, 0, 0};
        for (int qq = 0; qq < 4; ++qq)
            for (int nn = 0; nn < block; ++nn) p[qq] += std::norm(s(qq * block + nn, 0));
        res.p00_max = std::max(res.p00_max, p[0]);
        res.p11_max = std::max(res.p11_max, p[3]);
        res.p10_max = std::max(res.p10_max, p[2]);
        res.p01_min = std::min(res.p01_min, p[1]);
    });
    if (!outdir.empty() && !csv_name.empty()) {
        ensure_dir(outdir);
        write_trajectory_csv(join_path(outdir, csv_name), res.traj);
    }
    return res;
}

inline CwTransferResult run_fig5(const std::string& outdir = "") {
    return run_collinear_cw(1.0, outdir, "fig5_trajectory.csv");
}

inline CwTransferResult run_fig6(const std::string& outdir = "") {
    return run_collinear_cw(beta_ratio(2.0, 80.0, 100.0), outdir, "fig6_trajectory.csv");
}

// ---- pulsed two-qubit gate ----

struct SqrtswapResult {
    GateMatrix raw;
    GateMatrix fixed;
    double fidelity_canonical = 0.0;
    double fidelity_reference = 0.0;
    double max_dev_reference = 0.0; // elementwise vs the published matrix
    double tau = 0.0;
    double beta = 0.0;
};

inline SystemConfig sqrtswap_base_config() {
    SystemConfig cfg;
    cfg.model = Model::collinear;
    cfg.scheme = Scheme::two;
    cfg.omega_c = 1000.0;
    cfg.Delta = 990.0;
    cfg.alpha = 10.0;
    cfg.q1_init = 0;
    cfg.q2_init = 1;
    return cfg;
}

inline SqrtswapResult run_sqrtswap(double tau = 16.8763, int n_sector = 0,
                                   const std::string& outdir = "", double norm_tol = 1e-8) {
    SystemConfig base = sqrtswap_base_config();
    PulsedGateSetup setup;
    setup.beta = beta_ratio(base.alpha, base.Delta, base.omega_c);
    setup.n_sector = n_sector;
    setup.norm_tol = norm_tol;

    const SystemConfig cfg = pulsed_config(base, tau, setup);
    SqrtswapResult res;
    res.tau = tau;
    res.beta = setup.beta;
    res.raw = gate_tomography(cfg, pulsed_grid(tau), n_sector, norm_tol);
    res.fixed = phase_fix(res.raw);
    res.fidelity_canonical = gate_fidelity(res.fixed, sqrtswap_canonical());
    res.fidelity_reference = gate_fidelity(res.fixed, sqrtswap_reference());
    res.max_dev_reference =
        (res.fixed.entries - sqrtswap_reference()).cwiseAbs().maxCoeff();

    if (!outdir.empty()) {
        ensure_dir(outdir);
        ojson j = gate_to_json(res.fixed, res.fidelity_canonical);
        j["tau"] = tau;
        j["beta"] = setup.beta;
        j["max_dev_vs_reference"] = res.max_dev_reference;
        write_json(join_path(outdir, "sqrtswap_gate.json"), j);
    }
    return res;
}

// ---- scheme-1 demonstration ----

struct Scheme1Result {
    Trajectory traj;
    double p11_max = 0.0, p01_max = 0.0, p10_max = 0.0;
};

// With Delta_11 = -Delta_22 the two-photon resonance connects |00,n> and
// |11,n>; the |01>/|10> channels stay spectators. No published numbers exist
// for this variant, so the demo validates channel selectivity only.
inline Scheme1Result run_scheme1_demo(const std::string& outdir = "", double norm_tol = 1e-8) {
    SystemConfig cfg = cw_config(Model::per_dot, 100.0, 80.0, 2.0, 2, 0, 0);
    cfg.scheme = Scheme::one;
    const double om = std::abs(omega_eff_single(1.0, 80.0, 100.0));
    TimeGrid grid{0.0, 50.0 + 1.6 * 2.0 * std::numbers::pi / om, 0.0, 2000};
    StateVector psi0 = StateVector::basis_state(cfg.initial(), cfg.nmax_eff());

    Scheme1Result res;
    const int block = cfg.nmax_eff() + 1;
    res.traj = propagate_state(cfg, psi0, grid, norm_tol, [&](const Mat& s, double, int) {
        double p[4] = {0, 0, 0, 0};
        for (int qq = 0; qq < 4; ++qq)
            for (int nn = 0; nn < block; ++nn) p[qq] += std::norm(s(qq * block + nn, 0));
        res.p11_max = std::max(res.p11_max, p[3]);
        res.p01_max = std::max(res.p01_max, p[1]);
        res.p10_max = std::max(res.p10_max, p[2]);
    });
    if (!outdir.empty()) {
        ensure_dir(outdir);
        write_trajectory_csv(join_path(outdir, "scheme1_trajectory.csv"), res.traj);
    }
    return res;
}

// ---- dispatch by name ----

inline std::vector<std::string> scenario_names() {
    return {"fig2", "fig3", "fig5", "fig6", "sqrtswap", "scheme1-demo"};
}

struct ScenarioOverrides {
    std::optional<double> tau;
    std::optional<double> beta;
    std::optional<int> n_sector;
};

// Runs the named pinned scenario, writes its artifacts, and returns a flat
// summary (also echoed into <name>_summary.json).
inline std::map<std::string, double> run_scenario(const std::string& name,
                                                  const std::string& outdir,
                                                  const ScenarioOverrides& ov = {}) {
    std::map<std::string, double> sum;
    if (name == "fig2") {
        const Fig2Result r = run_fig2(outdir);
        double worst = 0.0;
        for (const auto& p : r.points) worst = std::max(worst, p.rel_err);
        sum["points"] = double(r.points.size());
        sum["worst_rel_err"] = worst;
    } else if (name == "fig3") {
        const Fig3Result r = run_fig3(outdir);
        double worst = 0.0;
        for (const auto& row : r.rows) {
            worst = std::max(worst, std::abs(row.p00_max - row.p00_pred) / row.p00_pred);
            worst = std::max(worst, std::abs(row.p11_max - row.p11_pred) / row.p11_pred);
        }
        sum["rows"] = double(r.rows.size());
        sum["worst_rel_err"] = worst;
    } else if (name == "fig5" || name == "fig6") {
        const CwTransferResult r = (name == "fig5") ? run_fig5(outdir) : run_fig6(outdir);
        sum["beta"] = r.beta2;
        sum["p00_max"] = r.p00_max;
        sum["p11_max"] = r.p11_max;
        sum["p10_max"] = r.p10_max;
        sum["p01_min"] = r.p01_min;
    } else if (name == "sqrtswap") {
        const SqrtswapResult r = run_sqrtswap(ov.tau.value_or(16.8763),
                                              ov.n_sector.value_or(0), outdir);
        sum["tau"] = r.tau;
        sum["beta"] = r.beta;
        sum["fidelity_canonical"] = r.fidelity_canonical;
        sum["fidelity_reference"] = r.fidelity_reference;
        sum["max_dev_vs_reference"] = r.max_dev_reference;
        sum["unitarity_defect"] = r.raw.unitarity_defect;
    } else if (name == "scheme1-demo") {
        const Scheme1Result r = run_scheme1_demo(outdir);
        sum["p11_max"] = r.p11_max;
        sum["p01_max"] = r.p01_max;
        sum["p10_max"] = r.p10_max;
    } else {
        throw std::invalid_argument("unknown scenario: " + name);
    }
    if (!outdir.empty()) {
        ojson j;
        for (const auto& [k, v] : sum) j[k] = v;
        write_json(join_path(outdir, name + "_summary.json"), j);
    }
    return sum;
}

} // namespace qdgate
