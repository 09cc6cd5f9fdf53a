// qdgate: simulator front end for two quantum dots coupled through a single
// cavity mode under collinear laser drive. Subcommands cover raw trajectory
// runs, the closed-form dispersive expressions, Rabi-frequency fits, leakage
// scans, gate tomography, pulse-width calibration, and the pinned
// reproduction scenarios.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qdgate/config.hpp"
#include "qdgate/scenarios.hpp"

namespace {

using namespace qdgate;

const char* model_name(Model m) {
    switch (m) {
    case Model::collinear: return "collinear";
    case Model::per_dot: return "per-dot";
    default: return "lab";
    }
}

void print_envelope(const char* label, const LaserParams& L) {
    const Envelope& e = L.envelope;
    if (e.shape == Envelope::Shape::gaussian)
        std::printf("%s = gaussian(peak=%.17g, t0=%.17g, tau=%.17g)", label, e.peak, e.t0,
                    e.tau);
    else
        std::printf("%s = ramp(peak=%.17g, ramp_time=%.17g)", label, e.peak, e.ramp_time);
    if (L.phase != 0.0) std::printf(" phase=%.17g", L.phase);
    if (e.scale != cplx(1.0)) std::printf(" scale=(%.17g,%.17g)", e.scale.real(), e.scale.imag());
    std::printf("\n");
}

// The --dry-run report: every derived quantity a run would use, no computation.
void print_resolved(const SystemConfig& sys, const TimeGrid* grid, double norm_tol,
                    const std::string& outdir) {
    std::printf("model = %s\n", model_name(sys.model));
    std::printf("scheme = %d\n", sys.scheme == Scheme::one ? 1 : 2);
    std::printf("omega_c = %.17g\nDelta = %.17g\nalpha = %.17g\n", sys.omega_c, sys.Delta,
                sys.alpha);
    std::printf("delta = %.17g\n", sys.delta_split());
    for (int j = 1; j <= 2; ++j)
        for (int k = 1; k <= 2; ++k)
            std::printf("Delta_%d%d = %.17g\n", j, k, sys.detuning(j, k));
    try {
        std::printf("beta = %.17g\n", beta_ratio(sys.alpha, sys.Delta, sys.omega_c));
    } catch (const std::domain_error&) {
        std::printf("beta = n/a (pole at this alpha/Delta/omega_c)\n");
    }
    std::printf("coupling = [[%.17g, %.17g], [%.17g, %.17g]]\n", sys.coupling[0][0],
                sys.coupling[0][1], sys.coupling[1][0], sys.coupling[1][1]);
    print_envelope("laser1", sys.lasers[0]);
    print_envelope("laser2", sys.lasers[1]);
    std::printf("initial = |%d%d,%d>\n", sys.q1_init, sys.q2_init, sys.n_init);
    std::printf("n_max = %d\n", sys.nmax_eff());
    if (sys.model == Model::lab) std::printf("omega_11 = %.17g\n", sys.omega_dot(1));
    const TermSet T = build_terms(sys);
    std::printf("dim = %d\nf_max = %.17g\n", T.d, T.f_max);
    if (grid) {
        double dt = 0.0;
        const int nsteps = detail::plan_steps(*grid, T.f_max, dt);
        std::printf("grid = [%.17g, %.17g] dt = %.17g steps = %d samples = %d\n",
                    grid->t_start, grid->t_end, dt, nsteps, grid->samples);
    }
    std::printf("norm_tol = %.17g\n", norm_tol);
    if (!outdir.empty()) std::printf("output_dir = %s\n", outdir.c_str());
}

RunConfig load(const std::string& path) {
    if (!std::filesystem::exists(path))
        throw CLI::ValidationError("--config", "file not found: " + path);
    return parse_config(path);
}

int cmd_simulate(const std::string& cfg_path, std::string outdir, bool dry) {
    RunConfig rc = load(cfg_path);
    if (!outdir.empty()) rc.output_dir = outdir;
    if (dry) {
        print_resolved(rc.system, &rc.grid, rc.norm_tol, rc.output_dir);
        return exitcode::ok;
    }
    StateVector psi0 = StateVector::basis_state(rc.system.initial(), rc.system.nmax_eff());
    const Trajectory tr = propagate_state(rc.system, psi0, rc.grid, rc.norm_tol);
    ensure_dir(rc.output_dir);
    const std::string out = join_path(rc.output_dir, "trajectory.csv");
    write_trajectory_csv(out, tr);
    std::printf("wrote %s (%zu samples, norm drift %.3g)\n", out.c_str(), tr.t.size(),
                tr.norm_drift);
    return exitcode::ok;
}

int cmd_analytic(double Omega, double Delta, double omega_c, double alpha, int n,
                 bool beta_mode, double beta2, bool dry) {
    if (dry) {
        std::printf("Omega = %.17g\nDelta = %.17g\nomega_c = %.17g\nalpha = %.17g\nn = %d\n",
                    Omega, Delta, omega_c, alpha, n);
        return exitcode::ok;
    }
    if (beta_mode) {
        std::printf("beta = %.9g\n", beta_ratio(alpha, Delta, omega_c));
        return exitcode::ok;
    }
    std::printf("omega_eff = %.9g\n", omega_eff_single(Omega, Delta, omega_c));
    if (n >= 0) {
        std::printf("p00_max = %.9g\n", p_max_00(Omega, Delta, omega_c, n));
        std::printf("p11_max = %.9g\n", p_max_11(Omega, Delta, omega_c, n));
    }
    if (beta2 > 0)
        std::printf("omega_eff_collinear = %.9g\n",
                    omega_eff_collinear(Omega, beta2, Delta, omega_c));
    return exitcode::ok;
}

int cmd_rabi(const std::string& cfg_path, const std::string& channel, double t_min,
             std::string outdir, bool dry) {
    RunConfig rc = load(cfg_path);
    if (!outdir.empty()) rc.output_dir = outdir;
    if (dry) {
        print_resolved(rc.system, &rc.grid, rc.norm_tol, rc.output_dir);
        std::printf("channel = %s\nfit_t_min = %.17g\n", channel.c_str(), t_min);
        return exitcode::ok;
    }
    Channel ch;
    if (channel == "p00") ch = Channel::p00;
    else if (channel == "p01") ch = Channel::p01;
    else if (channel == "p10") ch = Channel::p10;
    else if (channel == "p11") ch = Channel::p11;
    else throw CLI::ValidationError("--channel", "expected one of p00|p01|p10|p11");

    StateVector psi0 = StateVector::basis_state(rc.system.initial(), rc.system.nmax_eff());
    const Trajectory tr = propagate_state(rc.system, psi0, rc.grid, rc.norm_tol);
    const RabiFit fit = extract_rabi_frequency(tr, ch, t_min);
    std::printf("frequency = %.9g\namplitude = %.9g\noffset = %.9g\nphase = %.9g\nresidual = %.3g\n",
                fit.frequency, fit.amplitude, fit.offset, fit.phase, fit.residual);
    ensure_dir(rc.output_dir);
    write_json(join_path(rc.output_dir, "rabi_fit.json"), fit_to_json(fit, channel));
    return exitcode::ok;
}

int cmd_scan(const std::string& cfg_path, const std::vector<double>& gaps, double periods,
             std::string outdir, bool dry) {
    RunConfig rc = load(cfg_path);
    if (!outdir.empty()) rc.output_dir = outdir;
    if (dry) {
        print_resolved(rc.system, nullptr, rc.norm_tol, rc.output_dir);
        std::printf("gaps =");
        for (double g : gaps) std::printf(" %.17g", g);
        std::printf("\nperiods = %.17g\n", periods);
        return exitcode::ok;
    }
    const auto rows = max_population_scan(rc.system, gaps, periods);
    std::printf("gap      P00_max      P11_max      P00_pred     P11_pred\n");
    ensure_dir(rc.output_dir);
    std::ofstream csv(join_path(rc.output_dir, "scan.csv"));
    csv << "gap,P00_max,P11_max,P00_pred,P11_pred\n";
    for (const auto& r : rows) {
        std::printf("%-8g %-12.6g %-12.6g %-12.6g %-12.6g\n", r.gap, r.p00_max, r.p11_max,
                    r.p00_pred, r.p11_pred);
        csv << detail::fmt_double(r.gap) << ',' << detail::fmt_double(r.p00_max) << ','
            << detail::fmt_double(r.p11_max) << ',' << detail::fmt_double(r.p00_pred) << ','
            << detail::fmt_double(r.p11_pred) << '\n';
    }
    return exitcode::ok;
}

int cmd_gate(const std::string& cfg_path, double tau, double beta_override, double phase2,
             int n_sector, std::string outdir, bool dry) {
    RunConfig rc = load(cfg_path);
    if (!outdir.empty()) rc.output_dir = outdir;
    PulsedGateSetup setup;
    setup.beta = beta_override > 0
                     ? beta_override
                     : beta_ratio(rc.system.alpha, rc.system.Delta, rc.system.omega_c);
    setup.phase2 = phase2;
    setup.n_sector = n_sector;
    setup.norm_tol = rc.norm_tol;
    const SystemConfig cfg = pulsed_config(rc.system, tau, setup);
    if (dry) {
        print_resolved(cfg, nullptr, rc.norm_tol, rc.output_dir);
        std::printf("tau = %.17g\nwindow = [0, %.17g]\nphoton_sector = %d\n", tau, 10 * tau,
                    n_sector);
        return exitcode::ok;
    }
    const GateMatrix fixed = phase_fix(gate_tomography(cfg, pulsed_grid(tau), n_sector,
                                                       rc.norm_tol));
    const double fid = gate_fidelity(fixed, sqrtswap_canonical());
    ensure_dir(rc.output_dir);
    const std::string out = join_path(rc.output_dir, "gate.json");
    write_json(out, gate_to_json(fixed, fid));
    std::printf("wrote %s\nfidelity_vs_sqrtswap = %.9g\nunitarity_defect = %.3g\n",
                out.c_str(), fid, fixed.unitarity_defect);
    return exitcode::ok;
}

int cmd_calibrate(const std::string& cfg_path, double lo, double hi, double tol,
                  int n_sector, bool dry) {
    RunConfig rc = load(cfg_path);
    PulsedGateSetup setup;
    setup.beta = beta_ratio(rc.system.alpha, rc.system.Delta, rc.system.omega_c);
    setup.n_sector = n_sector;
    setup.norm_tol = rc.norm_tol;
    if (dry) {
        print_resolved(pulsed_config(rc.system, lo, setup), nullptr, rc.norm_tol, "");
        std::printf("bracket = [%.17g, %.17g]\ntol = %.17g\n", lo, hi, tol);
        return exitcode::ok;
    }
    const CalibrationResult res = calibrate_tau(rc.system, lo, hi, setup, tol);
    std::printf("tau_star = %.9g\nfidelity = %.9g\nevaluations = %d\n", res.tau_star,
                res.fidelity, res.evaluations);
    return exitcode::ok;
}

int cmd_scenario(const std::string& name, std::string outdir, const ScenarioOverrides& ov,
                 bool dry) {
    const auto names = scenario_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::fprintf(stderr, "unknown scenario '%s'; known:", name.c_str());
        for (const auto& n : names) std::fprintf(stderr, " %s", n.c_str());
        std::fprintf(stderr, "\n");
        return exitcode::usage;
    }
    if (outdir.empty()) outdir = default_output_dir();
    if (dry) {
        std::printf("scenario = %s\noutput_dir = %s\n", name.c_str(), outdir.c_str());
        if (name == "sqrtswap") {
            print_resolved(pulsed_config(sqrtswap_base_config(), ov.tau.value_or(16.8763),
                                         PulsedGateSetup{beta_ratio(10.0, 990.0, 1000.0)}),
                           nullptr, 1e-8, outdir);
            std::printf("tau = %.17g\n", ov.tau.value_or(16.8763));
        }
        return exitcode::ok;
    }
    const auto sum = run_scenario(name, outdir, ov);
    for (const auto& [k, v] : sum) std::printf("%s = %.9g\n", k.c_str(), v);
    return exitcode::ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-dot cavity-mediated gate simulator"};
    app.require_subcommand(1);

    bool dry = false;
    std::string cfg_path, outdir;

    auto* sim = app.add_subcommand("simulate", "integrate a trajectory and write CSV");
    sim->add_option("--config", cfg_path, "run configuration file")->required();
    sim->add_option("--out", outdir, "output directory");
    sim->add_flag("--dry-run", dry, "print resolved parameters and exit");

    double a_omega = 1.0, a_delta = 80.0, a_omegac = 100.0, a_alpha = 2.0, a_beta2 = 0.0;
    int a_n = -1;
    bool a_beta = false;
    auto* ana = app.add_subcommand("analytic", "closed-form dispersive expressions");
    ana->add_option("--omega", a_omega, "drive amplitude Omega");
    ana->add_option("--delta", a_delta, "detuning Delta");
    ana->add_option("--omega-c", a_omegac, "cavity frequency");
    ana->add_option("--alpha", a_alpha, "splitting parameter");
    ana->add_option("--n", a_n, "photon number for leakage maxima");
    ana->add_flag("--beta", a_beta, "print the amplitude ratio beta instead");
    ana->add_option("--beta2", a_beta2, "second amplitude for the collinear frequency");
    ana->add_flag("--dry-run", dry, "print resolved parameters and exit");

    std::string r_channel = "p10";
    double r_tmin = 0.0;
    auto* rab = app.add_subcommand("rabi", "fit the effective Rabi frequency");
    rab->add_option("--config", cfg_path, "run configuration file")->required();
    rab->add_option("--channel", r_channel, "population channel to fit (default p10)");
    rab->add_option("--t-min", r_tmin, "drop samples before this time");
    rab->add_option("--out", outdir, "output directory");
    rab->add_flag("--dry-run", dry, "print resolved parameters and exit");

    std::vector<double> s_gaps{10.0, 15.0, 20.0, 25.0, 30.0};
    double s_periods = 1.6;
    auto* scn = app.add_subcommand("scan", "max leakage populations vs cavity-drive gap");
    scn->add_option("--config", cfg_path, "run configuration file")->required();
    scn->add_option("--gaps", s_gaps, "gap values omega_c - Delta")->delimiter(',');
    scn->add_option("--periods", s_periods, "effective Rabi periods to cover");
    scn->add_option("--out", outdir, "output directory");
    scn->add_flag("--dry-run", dry, "print resolved parameters and exit");

    double g_tau = 16.8763, g_beta = 0.0, g_phase2 = std::numbers::pi;
    int g_n = 0;
    auto* gat = app.add_subcommand("gate", "pulsed two-qubit gate tomography");
    gat->add_option("--config", cfg_path, "run configuration file")->required();
    gat->add_option("--tau", g_tau, "gaussian pulse width");
    gat->add_option("--beta", g_beta, "amplitude ratio override (default: closed form)");
    gat->add_option("--phase2", g_phase2, "second-laser phase");
    gat->add_option("--n-sector", g_n, "photon sector for tomography");
    gat->add_option("--out", outdir, "output directory");
    gat->add_flag("--dry-run", dry, "print resolved parameters and exit");

    double c_lo = 10.0, c_hi = 25.0, c_tol = 1e-3;
    int c_n = 0;
    auto* cal = app.add_subcommand("calibrate", "optimize pulse width for gate fidelity");
    cal->add_option("--config", cfg_path, "run configuration file")->required();
    cal->add_option("--lo", c_lo, "bracket lower edge");
    cal->add_option("--hi", c_hi, "bracket upper edge");
    cal->add_option("--tol", c_tol, "tau tolerance");
    cal->add_option("--n-sector", c_n, "photon sector");
    cal->add_flag("--dry-run", dry, "print resolved parameters and exit");

    std::string sc_name;
    double sc_tau = 0.0;
    int sc_n = -1;
    auto* sce = app.add_subcommand("scenario", "pinned reproduction runs");
    sce->add_option("name", sc_name, "fig2|fig3|fig5|fig6|sqrtswap|scheme1-demo")->required();
    sce->add_option("--tau", sc_tau, "pulse width override (sqrtswap)");
    sce->add_option("--n-sector", sc_n, "photon sector override (sqrtswap)");
    sce->add_option("--out", outdir, "output directory");
    sce->add_flag("--dry-run", dry, "print resolved parameters and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return qdgate::exitcode::usage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(cfg_path, outdir, dry);
        if (ana->parsed())
            return cmd_analytic(a_omega, a_delta, a_omegac, a_alpha, a_n, a_beta, a_beta2, dry);
        if (rab->parsed()) return cmd_rabi(cfg_path, r_channel, r_tmin, outdir, dry);
        if (scn->parsed()) return cmd_scan(cfg_path, s_gaps, s_periods, outdir, dry);
        if (gat->parsed())
            return cmd_gate(cfg_path, g_tau, g_beta, g_phase2, g_n, outdir, dry);
        if (cal->parsed()) return cmd_calibrate(cfg_path, c_lo, c_hi, c_tol, c_n, dry);
        if (sce->parsed()) {
            qdgate::ScenarioOverrides ov;
            if (sc_tau > 0) ov.tau = sc_tau;
            if (sc_n >= 0) ov.n_sector = sc_n;
            return cmd_scenario(sc_name, outdir, ov, dry);
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qdgate::exitcode::usage;
    } catch (const qdgate::unknown_key_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qdgate::exitcode::unknown_key;
    } catch (const qdgate::config_parse_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qdgate::exitcode::parse;
    } catch (const qdgate::calibration_failure& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qdgate::exitcode::numerical;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qdgate::exitcode::validation;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qdgate::exitcode::validation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return qdgate::exitcode::numerical;
    }
    return qdgate::exitcode::usage;
}
