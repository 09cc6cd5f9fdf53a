#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "qdgate/fockspace.hpp"

// Physical parameters and the three Hamiltonian variants.
//
// Conventions (hbar = 1, frequencies in units of the peak drive Omega_1):
//   * dot ground levels at zero: omega_{j,0} = 0
//   * detunings Delta_jk = omega_k - omega_{j,1}
//   * dot splitting delta = omega_{1,1} - omega_{2,1} = alpha*(omega_c - Delta)
//   * scheme 2: Delta_11 = Delta_22 = Delta   (drives |01,n> <-> |10,n>)
//     scheme 1: Delta_11 = +Delta, Delta_22 = -Delta  (drives |00,n> <-> |11,n>)
//   * cross detunings follow from the definitions:
//     Delta_12 = Delta_22 - delta,  Delta_21 = Delta_11 + delta
//
// Rotating frame (the default model): with both lasers hitting both dots,
//
//   H(t) = - sum_{j,k} (W_jk(t)/2) [ a^dag sigma_{j,01} e^{i(Delta_jk+omega_c)t}
//                                  + sigma_{j,01} a     e^{i(Delta_jk-omega_c)t} ] + h.c.
//
// where W_jk(t) = coupling[j][k] * envelope_k(t). The per-dot variant keeps
// only k = j. The lab variant adds the static diagonal omega_c*n +
// sum_j omega_{j,1} sigma_{j,11} and replaces both exponentials by
// e^{i omega_k t}; the rotating frame is its interaction picture, so bare
// populations agree between the two.

namespace qdgate {

enum class Model { collinear, per_dot, lab };
enum class Scheme { one, two };

struct DotParams {
    int index = 1;        // 1 or 2
    double omega_1 = 0.0; // exciton frequency; ground level fixed at 0
};

struct Envelope {
    enum class Shape { constant_ramp, gaussian };
    Shape shape = Shape::constant_ramp;
    double peak = 1.0;
    double ramp_time = 50.0; // constant_ramp: sin^2 turn-on length
    double t0 = 0.0;         // gaussian center
    double tau = 1.0;        // gaussian width
    cplx scale = 1.0;        // extra complex factor, e.g. e^{i pi}

    static Envelope ramp(double peak, double ramp_time) {
        if (ramp_time <= 0) throw std::invalid_argument("Envelope: ramp_time must be > 0");
        Envelope e;
        e.shape = Shape::constant_ramp;
        e.peak = peak;
        e.ramp_time = ramp_time;
        return e;
    }
    static Envelope gaussian(double peak, double t0, double tau, cplx scale = 1.0) {
        if (tau <= 0) throw std::invalid_argument("Envelope: tau must be > 0");
        Envelope e;
        e.shape = Shape::gaussian;
        e.peak = peak;
        e.t0 = t0;
        e.tau = tau;
        e.scale = scale;
        return e;
    }
    cplx eval(double t) const {
        switch (shape) {
        case Shape::gaussian: {
            const double x = t - t0;
            return peak * scale * std::exp(-x * x / (2.0 * tau * tau));
        }
        case Shape::constant_ramp:
        default: {
            if (t < 0) return 0.0;
            if (t >= ramp_time) return peak * scale;
            const double s = std::sin(0.5 * std::numbers::pi * t / ramp_time);
            return peak * scale * s * s;
        }
        }
    }
};

inline cplx envelope_eval(const Envelope& env, double t) { return env.eval(t); }

struct LaserParams {
    int index = 1;      // 1 or 2
    Envelope envelope;
    double phase = 0.0; // relative carrier phase, enters as e^{i phase}
};

// Omega_jk = g_c * g_L / nu, the adiabatically eliminated two-photon coupling.
// Convenience only; the simulator consumes the coupling matrix directly.
inline double effective_coupling(double g_c, double g_L, double nu) {
    if (nu == 0.0) throw std::domain_error("effective_coupling: nu must be nonzero");
    return g_c * g_L / nu;
}

struct SystemConfig {
    Model model = Model::collinear;
    Scheme scheme = Scheme::two;

    double omega_c = 100.0;
    double Delta = 80.0; // diagonal detuning magnitude (see scheme rules above)
    double alpha = 0.0;  // splitting parameter; delta = alpha*(omega_c - Delta)

    // coupling[j-1][k-1] = base Omega_jk; collinearity means column-constant.
    std::array<std::array<double, 2>, 2> coupling{{{1.0, 1.0}, {1.0, 1.0}}};
    std::array<LaserParams, 2> lasers{LaserParams{1, {}, 0.0}, LaserParams{2, {}, 0.0}};

    int n_init = 0;
    int q1_init = 0, q2_init = 1;
    int n_max = -1;           // -1: default rule n_init + 6
    double lab_omega11 = 0.0; // 0: default 20*omega_c (absolute scale, lab frame only)

    int nmax_eff() const { return n_max >= 0 ? n_max : n_init + 6; }
    BasisIndex initial() const { return {q1_init, q2_init, n_init}; }

    double delta_split() const { return alpha * (omega_c - Delta); }

    double detuning_diag(int j) const {
        if (j != 1 && j != 2) throw std::invalid_argument("detuning_diag: j must be 1 or 2");
        if (scheme == Scheme::two) return Delta;
        return j == 1 ? Delta : -Delta;
    }
    // Delta_jk = omega_k - omega_{j,1}
    double detuning(int j, int k) const {
        if (k != 1 && k != 2) throw std::invalid_argument("detuning: k must be 1 or 2");
        if (j == k) return detuning_diag(j);
        if (j == 1 && k == 2) return detuning_diag(2) - delta_split();
        return detuning_diag(1) + delta_split(); // j == 2, k == 1
    }
    double omega_dot(int j) const {
        const double w11 = lab_omega11 > 0 ? lab_omega11 : 20.0 * omega_c;
        return j == 1 ? w11 : w11 - delta_split();
    }
    double omega_laser(int k) const { return detuning_diag(k) + omega_dot(k); }

    DotParams dot_params(int j) const { return {j, omega_dot(j)}; }
};

inline void validate(const SystemConfig& cfg) {
    if (cfg.omega_c <= 0) throw std::invalid_argument("config: omega_c must be > 0");
    if (std::abs(cfg.Delta - cfg.omega_c) < 1e-6 || std::abs(cfg.Delta + cfg.omega_c) < 1e-6)
        throw std::invalid_argument("config: Delta at the omega_c pole");
    if (cfg.n_init < 0) throw std::invalid_argument("config: n_init must be >= 0");
    if (cfg.q1_init < 0 || cfg.q1_init > 1 || cfg.q2_init < 0 || cfg.q2_init > 1)
        throw std::invalid_argument("config: initial dot levels must be 0 or 1");
    if (cfg.nmax_eff() < cfg.n_init)
        throw std::invalid_argument("config: n_max below initial photon number");
    for (const auto& l : cfg.lasers) {
        if (l.envelope.shape == Envelope::Shape::gaussian && l.envelope.tau <= 0)
            throw std::invalid_argument("config: gaussian tau must be > 0");
        if (l.envelope.shape == Envelope::Shape::constant_ramp && l.envelope.ramp_time <= 0)
            throw std::invalid_argument("config: ramp_time must be > 0");
    }
}

// ---- time-dependent generator, term form ----
//
// H(t) = diag + sum_ch [ c_ch(t) * Op_ch + h.c. ],
// c_ch(t) = sum_osc weight * envelope_laser(t) * e^{i freq t}.
//
// Op_ch is one of a^dag sigma_{j,01} (raising) or sigma_{j,01} a (lowering),
// stored as real coordinate lists. The propagator consumes this directly; the
// dense builders below materialize it for inspection and tests.

struct CooEntry {
    int row, col;
    double val;
};

struct Oscillation {
    int laser;   // 0-based envelope index
    double freq; // phase frequency of e^{i freq t}
    cplx weight; // -(1/2) * Omega_jk * e^{i phase_k}
};

struct DriveChannel {
    std::vector<CooEntry> entries;
    std::vector<Oscillation> oscs;
};

struct TermSet {
    int d = 0;
    Eigen::VectorXd diag; // static part (lab frame); zero vector otherwise
    std::vector<DriveChannel> channels;
    double f_max = 0.0; // fastest phase rate, for the step-size guard
};

namespace detail {

inline std::vector<CooEntry> raising_op(int j, int n_max) {
    // a^dag sigma_{j,01}: |..1_j.., n> -> |..0_j.., n+1>, factor sqrt(n+1)
    std::vector<CooEntry> es;
    for (int qq = 0; qq < 4; ++qq) {
        const int q1 = qq >> 1, q2 = qq & 1;
        if ((j == 1 ? q1 : q2) != 1) continue;
        const int q1n = (j == 1) ? 0 : q1, q2n = (j == 2) ? 0 : q2;
        for (int n = 0; n < n_max; ++n)
            es.push_back({(2 * q1n + q2n) * (n_max + 1) + n + 1,
                          qq * (n_max + 1) + n, std::sqrt(double(n + 1))});
    }
    return es;
}

inline std::vector<CooEntry> lowering_op(int j, int n_max) {
    // sigma_{j,01} a: |..1_j.., n> -> |..0_j.., n-1>, factor sqrt(n)
    std::vector<CooEntry> es;
    for (int qq = 0; qq < 4; ++qq) {
        const int q1 = qq >> 1, q2 = qq & 1;
        if ((j == 1 ? q1 : q2) != 1) continue;
        const int q1n = (j == 1) ? 0 : q1, q2n = (j == 2) ? 0 : q2;
        for (int n = 1; n <= n_max; ++n)
            es.push_back({(2 * q1n + q2n) * (n_max + 1) + n - 1,
                          qq * (n_max + 1) + n, std::sqrt(double(n))});
    }
    return es;
}

} // namespace detail

inline TermSet build_terms(const SystemConfig& cfg) {
    const int n_max = cfg.nmax_eff();
    TermSet T;
    T.d = dim(n_max);
    T.diag = Eigen::VectorXd::Zero(T.d);

    const bool lab = cfg.model == Model::lab;
    if (lab) {
        for (int i = 0; i < T.d; ++i) {
            const BasisIndex b = state_of(i, n_max);
            T.diag[i] = cfg.omega_c * b.n + (b.q1 ? cfg.omega_dot(1) : 0.0) +
                        (b.q2 ? cfg.omega_dot(2) : 0.0);
        }
    }

    for (int j = 1; j <= 2; ++j) {
        DriveChannel up{detail::raising_op(j, n_max), {}};
        DriveChannel dn{detail::lowering_op(j, n_max), {}};
        for (int k = 1; k <= 2; ++k) {
            if (cfg.model == Model::per_dot && k != j) continue;
            const double w = cfg.coupling[j - 1][k - 1];
            if (w == 0.0) continue;
            const cplx weight = -0.5 * w * std::polar(1.0, cfg.lasers[k - 1].phase);
            const double f_up = lab ? cfg.omega_laser(k) : cfg.detuning(j, k) + cfg.omega_c;
            const double f_dn = lab ? cfg.omega_laser(k) : cfg.detuning(j, k) - cfg.omega_c;
            up.oscs.push_back({k - 1, f_up, weight});
            dn.oscs.push_back({k - 1, f_dn, weight});
        }
        if (!up.oscs.empty()) T.channels.push_back(std::move(up));
        if (!dn.oscs.empty()) T.channels.push_back(std::move(dn));
    }

    double f = 0.0;
    for (const auto& ch : T.channels)
        for (const auto& o : ch.oscs) f = std::max(f, std::abs(o.freq));
    if (lab) f = std::max(f, T.diag.cwiseAbs().maxCoeff());
    T.f_max = std::max(f, 1.0); // floor avoids a degenerate zero-drive guard
    return T;
}

inline cplx channel_coefficient(const SystemConfig& cfg, const DriveChannel& ch, double t) {
    cplx c = 0.0;
    for (const auto& o : ch.oscs)
        c += o.weight * cfg.lasers[o.laser].envelope.eval(t) *
             std::polar(1.0, o.freq * t);
    return c;
}

// Dense H(t). Every entry is written together with its mirrored conjugate, so
// H equals its adjoint exactly, not just to rounding.
inline OperatorMatrix hamiltonian(const SystemConfig& cfg, const TermSet& T, double t) {
    OperatorMatrix H{Mat::Zero(T.d, T.d), true};
    for (int i = 0; i < T.d; ++i) H.entries(i, i) = T.diag[i];
    for (const auto& ch : T.channels) {
        const cplx c = channel_coefficient(cfg, ch, t);
        for (const auto& e : ch.entries) {
            const cplx z = c * e.val;
            H.entries(e.row, e.col) += z;
            H.entries(e.col, e.row) += std::conj(z);
        }
    }
    return H;
}

inline OperatorMatrix hamiltonian_rotating(const SystemConfig& cfg, double t) {
    if (cfg.model != Model::collinear)
        throw std::invalid_argument("hamiltonian_rotating: config model is not collinear");
    return hamiltonian(cfg, build_terms(cfg), t);
}

inline OperatorMatrix hamiltonian_per_dot(const SystemConfig& cfg, double t) {
    if (cfg.model != Model::per_dot)
        throw std::invalid_argument("hamiltonian_per_dot: config model is not per-dot");
    return hamiltonian(cfg, build_terms(cfg), t);
}

inline OperatorMatrix hamiltonian_lab(const SystemConfig& cfg, double t) {
    if (cfg.model != Model::lab)
        throw std::invalid_argument("hamiltonian_lab: config model is not lab");
    return hamiltonian(cfg, build_terms(cfg), t);
}

} // namespace qdgate
