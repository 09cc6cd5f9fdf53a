#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/numeric/odeint/external/eigen/eigen_resize.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "qdgate/model.hpp"

// Time integration of i d(psi)/dt = H(t) psi.
//
// The Hamiltonian is small (dimension <= ~48) but carries phases up to
// omega_c + max|Delta_jk|, so the cost is step count, not dimension. We use
// the Fehlberg 7(8) tableau in a fixed-step loop: with the step guard
// dt * f_max <= 0.1 the local error sits far below the norm tolerance, and a
// fixed step makes runs bit-reproducible (no adaptive control flow). Norm
// conservation is not built into the scheme, so it is certified a posteriori
// at every step against the configured tolerance.
//
// Several right-hand sides (tomography columns, a full propagator) integrate
// as one matrix state: the stage arithmetic and phase evaluations are shared
// across columns.

namespace qdgate {

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 0.0;
    double dt_max = 0.0; // 0: default 0.05 / f_max
    int samples = 2000;  // output decimation target
};

struct Trajectory {
    std::vector<double> t;
    std::vector<double> p00, p01, p10, p11;
    std::vector<double> norm;   // squared norm
    std::vector<double> n_mean; // photon expectation
    double norm_drift = 0.0;    // max |norm - 1| seen at any step
};

namespace detail {

struct TermRhs {
    const SystemConfig* cfg;
    const TermSet* T;
    bool has_diag;

    void operator()(const Mat& psi, Mat& dpsi, double t) const {
        dpsi.resize(psi.rows(), psi.cols());
        if (has_diag)
            dpsi = T->diag.cast<cplx>().asDiagonal() * psi;
        else
            dpsi.setZero();
        for (const auto& ch : T->channels) {
            const cplx c = channel_coefficient(*cfg, ch, t);
            const cplx cc = std::conj(c);
            for (const auto& e : ch.entries) {
                dpsi.row(e.row) += (c * e.val) * psi.row(e.col);
                dpsi.row(e.col) += (cc * e.val) * psi.row(e.row);
            }
        }
        dpsi *= cplx(0.0, -1.0);
    }
};

// Signed dt: t_end < t_start integrates backward, same step-size guard.
inline int plan_steps(const TimeGrid& g, double f_max, double& dt_out) {
    if (g.t_end == g.t_start) throw std::invalid_argument("grid: t_end must differ from t_start");
    double dtm = g.dt_max > 0 ? g.dt_max : 0.05 / f_max;
    if (dtm * f_max > 0.1 + 1e-12)
        throw std::invalid_argument("grid: dt_max violates the stability guard dt*f_max <= 0.1");
    const double span = g.t_end - g.t_start;
    int nsteps = std::max(1, int(std::ceil(std::abs(span) / dtm - 1e-12)));
    dt_out = span / nsteps;
    return nsteps;
}

// per-step hook: (state, t, step index); return value unused
using StepHook = std::function<void(const Mat&, double, int)>;

// Core fixed-step loop; psi is modified in place. Certifies the squared norm
// of every column at every step and throws on drift or non-finite values.
inline double integrate(const SystemConfig& cfg, const TermSet& T, Mat& psi,
                        const TimeGrid& grid, double norm_tol,
                        const StepHook& hook = {}) {
    double dt = 0.0;
    const int nsteps = plan_steps(grid, T.f_max, dt);
    TermRhs rhs{&cfg, &T, T.diag.cwiseAbs().maxCoeff() > 0};

    boost::numeric::odeint::runge_kutta_fehlberg78<Mat, double, Mat, double,
                                                   boost::numeric::odeint::vector_space_algebra>
        stepper;

    Eigen::VectorXd norm0(psi.cols());
    for (int c = 0; c < psi.cols(); ++c) norm0[c] = psi.col(c).squaredNorm();

    double drift = 0.0;
    if (hook) hook(psi, grid.t_start, 0);
    for (int i = 0; i < nsteps; ++i) {
        const double t = grid.t_start + i * dt;
        stepper.do_step(rhs, psi, t, dt);
        for (int c = 0; c < psi.cols(); ++c) {
            const double nn = psi.col(c).squaredNorm();
            if (!std::isfinite(nn))
                throw numerical_failure("integrate: non-finite state amplitude");
            drift = std::max(drift, std::abs(nn - norm0[c]));
        }
        if (drift > norm_tol)
            throw integration_failure("integrate: norm drift exceeds tolerance", drift);
        if (hook) hook(psi, grid.t_start + (i + 1) * dt, i + 1);
    }
    return drift;
}

inline int sample_stride(const TimeGrid& g, int nsteps) {
    const int target = std::max(2, g.samples);
    return std::max(1, nsteps / (target - 1));
}

} // namespace detail

// Population bookkeeping for an arbitrary (projected or full) basis layout.
// labels[i] gives the (q1,q2,n) meaning of amplitude i.
inline void record_sample(Trajectory& out, const Vec& amps,
                          const std::vector<BasisIndex>& labels, double t) {
    double p[4] = {0, 0, 0, 0};
    double nm = 0.0, nn = 0.0;
    for (int i = 0; i < amps.size(); ++i) {
        const double a2 = std::norm(amps[i]);
        p[2 * labels[i].q1 + labels[i].q2] += a2;
        nm += labels[i].n * a2;
        nn += a2;
    }
    out.t.push_back(t);
    out.p00.push_back(p[0]);
    out.p01.push_back(p[1]);
    out.p10.push_back(p[2]);
    out.p11.push_back(p[3]);
    out.norm.push_back(nn);
    out.n_mean.push_back(nm);
}

inline std::vector<BasisIndex> full_labels(int n_max) {
    std::vector<BasisIndex> ls(dim(n_max));
    for (int i = 0; i < dim(n_max); ++i) ls[i] = state_of(i, n_max);
    return ls;
}

// Integrate one state and record the population trajectory. An optional
// per-step hook sees every accepted step (used by max-population scans, which
// must not depend on output decimation).
inline Trajectory propagate_state(const SystemConfig& cfg, const StateVector& psi0,
                                  const TimeGrid& grid, double norm_tol = 1e-8,
                                  const detail::StepHook& extra_hook = {}) {
    validate(cfg);
    const TermSet T = build_terms(cfg);
    if (psi0.amplitudes.size() != T.d)
        throw std::invalid_argument("propagate_state: state dimension mismatch");

    double dt = 0.0;
    const int nsteps = detail::plan_steps(grid, T.f_max, dt);
    const int stride = detail::sample_stride(grid, nsteps);
    const auto labels = full_labels(cfg.nmax_eff());

    Trajectory traj;
    Mat psi = psi0.amplitudes;
    traj.norm_drift = detail::integrate(
        cfg, T, psi, grid, norm_tol, [&](const Mat& s, double t, int step) {
            if (step % stride == 0 || step == nsteps) record_sample(traj, s.col(0), labels, t);
            if (extra_hook) extra_hook(s, t, step);
        });
    return traj;
}

// Full propagator U(t_end, t_start) by integrating the identity columnwise
// (as one matrix state). The unitarity defect is checked against tol.
inline Mat propagate_unitary(const SystemConfig& cfg, const TimeGrid& grid,
                             double norm_tol = 1e-8) {
    validate(cfg);
    const TermSet T = build_terms(cfg);
    Mat U = Mat::Identity(T.d, T.d);
    detail::integrate(cfg, T, U, grid, norm_tol);
    const double defect = (U.adjoint() * U - Mat::Identity(T.d, T.d)).cwiseAbs().maxCoeff();
    if (defect > 10.0 * norm_tol)
        throw integration_failure("propagate_unitary: unitarity defect exceeds tolerance", defect);
    return U;
}

struct ConvergenceReport {
    double dev_truncation = 0.0; // population change when n_max -> n_max + 2
    double dev_step = 0.0;       // population change when dt -> dt/2
    bool passed(double tol) const { return dev_truncation < tol && dev_step < tol; }
};

// Self-convergence measurement: rerun with a larger Fock cutoff and with half
// the step and report the worst population deviation on the shared samples.
inline ConvergenceReport convergence_check(const SystemConfig& cfg, const StateVector& psi0,
                                           const TimeGrid& grid, double norm_tol = 1e-8) {
    const Trajectory base = propagate_state(cfg, psi0, grid, norm_tol);

    auto max_dev = [](const Trajectory& a, const Trajectory& b) {
        const size_t m = std::min(a.t.size(), b.t.size());
        double d = 0.0;
        for (size_t i = 0; i < m; ++i) {
            d = std::max(d, std::abs(a.p00[i] - b.p00[i]));
            d = std::max(d, std::abs(a.p01[i] - b.p01[i]));
            d = std::max(d, std::abs(a.p10[i] - b.p10[i]));
            d = std::max(d, std::abs(a.p11[i] - b.p11[i]));
        }
        return d;
    };

    SystemConfig big = cfg;
    big.n_max = cfg.nmax_eff() + 2;
    StateVector psi_big = StateVector::basis_state({0, 0, 0}, big.n_max);
    psi_big.amplitudes.setZero();
    for (int i = 0; i < psi0.amplitudes.size(); ++i) {
        const BasisIndex b = state_of(i, psi0.n_max);
        psi_big.amplitudes[index_of(b, big.n_max)] = psi0.amplitudes[i];
    }
    const Trajectory tr_big = propagate_state(big, psi_big, grid, norm_tol);

    TimeGrid fine = grid;
    double dt = 0.0;
    const int nsteps = detail::plan_steps(grid, build_terms(cfg).f_max, dt);
    fine.dt_max = dt / 2.0;
    fine.samples = grid.samples; // strides align on the shared coarse samples
    const Trajectory tr_fine = propagate_state(cfg, psi0, fine, norm_tol);

    ConvergenceReport rep;
    rep.dev_truncation = max_dev(base, tr_big);
    // compare at matching times: the fine run has twice the steps, so sample
    // times may differ; compare on the final point and the coarse overlap
    {
        double d = 0.0;
        size_t j = 0;
        for (size_t i = 0; i < base.t.size(); ++i) {
            while (j + 1 < tr_fine.t.size() && tr_fine.t[j] < base.t[i] - 1e-12) ++j;
            if (std::abs(tr_fine.t[j] - base.t[i]) < 1e-9) {
                d = std::max(d, std::abs(base.p00[i] - tr_fine.p00[j]));
                d = std::max(d, std::abs(base.p01[i] - tr_fine.p01[j]));
                d = std::max(d, std::abs(base.p10[i] - tr_fine.p10[j]));
                d = std::max(d, std::abs(base.p11[i] - tr_fine.p11[j]));
            }
        }
        // the endpoints always coincide
        const size_t ia = base.t.size() - 1, ib = tr_fine.t.size() - 1;
        d = std::max(d, std::abs(base.p10[ia] - tr_fine.p10[ib]));
        d = std::max(d, std::abs(base.p01[ia] - tr_fine.p01[ib]));
        rep.dev_step = d;
    }
    return rep;
}

} // namespace qdgate
