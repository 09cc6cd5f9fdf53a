#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "qdgate/propagator.hpp"

// Rabi-frequency extraction from a population trajectory.
//
// Populations oscillate as P(t) = A sin^2(w t/2 + phi) + C, a single spectral
// line at w. The extractor scans a dense periodogram for the line, then
// refines w by golden-section minimization of the exact least-squares
// residual of the linear model a + b cos(wt) + c sin(wt), from which
// (A, phi, C) follow. Seeding from the spectrum keeps the refinement out of
// local minima; the fast leakage wiggle riding on the curves is orders of
// magnitude weaker than the main line and does not compete.

namespace qdgate {

struct RabiFit {
    double frequency = 0.0; // extracted w
    double amplitude = 0.0; // A
    double offset = 0.0;    // C
    double phase = 0.0;     // phi
    double residual = 0.0;  // rms misfit
};

enum class Channel { p00, p01, p10, p11 };

inline const std::vector<double>& channel_series(const Trajectory& tr, Channel ch) {
    switch (ch) {
    case Channel::p00: return tr.p00;
    case Channel::p01: return tr.p01;
    case Channel::p10: return tr.p10;
    default: return tr.p11;
    }
}

inline std::string channel_name(Channel ch) {
    switch (ch) {
    case Channel::p00: return "P00";
    case Channel::p01: return "P01";
    case Channel::p10: return "P10";
    default: return "P11";
    }
}

namespace detail {

// power of the demeaned series at angular frequency w (uniform grid, using
// rotation recurrences instead of per-sample trig)
inline double line_power(const std::vector<double>& t, const std::vector<double>& y0, double w) {
    const double c0 = std::cos(w * t[0]), s0 = std::sin(w * t[0]);
    const double h = t[1] - t[0];
    const double cr = std::cos(w * h), sr = std::sin(w * h);
    double c = c0, s = s0, sc = 0.0, ss = 0.0;
    for (size_t i = 0; i < y0.size(); ++i) {
        sc += c * y0[i];
        ss += s * y0[i];
        const double cn = c * cr - s * sr;
        s = c * sr + s * cr;
        c = cn;
    }
    return sc * sc + ss * ss;
}

// least-squares residual of y ~ a + b cos(wt) + c sin(wt); optionally returns
// the coefficients
inline double harmonic_resid(const std::vector<double>& t, const std::vector<double>& y,
                             double w, double abc[3] = nullptr) {
    // normal equations of the 3-parameter linear model
    double S[3][3] = {{0}}, r[3] = {0, 0, 0};
    for (size_t i = 0; i < y.size(); ++i) {
        const double ct = std::cos(w * t[i]), st = std::sin(w * t[i]);
        const double base[3] = {1.0, ct, st};
        for (int a = 0; a < 3; ++a) {
            r[a] += base[a] * y[i];
            for (int b = a; b < 3; ++b) S[a][b] += base[a] * base[b];
        }
    }
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < a; ++b) S[a][b] = S[b][a];
    Eigen::Matrix3d M;
    Eigen::Vector3d v;
    for (int a = 0; a < 3; ++a) {
        v[a] = r[a];
        for (int b = 0; b < 3; ++b) M(a, b) = S[a][b];
    }
    const Eigen::Vector3d x = M.ldlt().solve(v);
    double ss = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        const double f = x[0] + x[1] * std::cos(w * t[i]) + x[2] * std::sin(w * t[i]);
        ss += (y[i] - f) * (y[i] - f);
    }
    if (abc)
        for (int a = 0; a < 3; ++a) abc[a] = x[a];
    return ss;
}

} // namespace detail

// t_min discards the turn-on transient (CW runs ramp over the first ~50 time
// units). Throws extraction_failure when the series has no usable line.
inline RabiFit extract_rabi_frequency(const Trajectory& traj, Channel channel,
                                      double t_min = 0.0) {
    const auto& full = channel_series(traj, channel);
    std::vector<double> t, y;
    for (size_t i = 0; i < traj.t.size(); ++i)
        if (traj.t[i] >= t_min) {
            t.push_back(traj.t[i]);
            y.push_back(full[i]);
        }
    if (t.size() < 16) throw extraction_failure("extract_rabi_frequency: too few samples");

    const double mean = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    std::vector<double> y0(y.size());
    double var = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        y0[i] = y[i] - mean;
        var += y0[i] * y0[i];
    }
    var /= y.size();
    if (var < 1e-16)
        throw extraction_failure("extract_rabi_frequency: channel is constant");

    const double span = t.back() - t.front();
    const double dt_s = t[1] - t[0];
    const double w_lo = 0.5 * 2.0 * std::numbers::pi / span;
    const double w_hi = 0.45 * std::numbers::pi / dt_s;

    const int M = 4000;
    std::vector<double> power(M);
    double w_best = w_lo, p_best = -1.0;
    for (int i = 0; i < M; ++i) {
        const double w = w_lo + (w_hi - w_lo) * i / (M - 1);
        power[i] = detail::line_power(t, y0, w);
        if (power[i] > p_best) {
            p_best = power[i];
            w_best = w;
        }
    }
    std::vector<double> sorted = power;
    std::nth_element(sorted.begin(), sorted.begin() + M / 2, sorted.end());
    const double med = std::max(sorted[M / 2], 1e-300);
    if (p_best < 10.0 * med)
        throw extraction_failure("extract_rabi_frequency: no spectral peak above noise floor");

    // golden-section refinement of the residual around the seed. The true
    // line sits within one scan step of the periodogram argmax, so the
    // bracket must cover at least that; a fixed percentage would shrink
    // below the step size on densely sampled trajectories and clip the
    // minimum at the bracket edge.
    const double step = (w_hi - w_lo) / (M - 1);
    const double half = std::max(0.02 * w_best, 1.5 * step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = std::max(w_best - half, 0.25 * w_lo), b = w_best + half;
    double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
    double f1 = detail::harmonic_resid(t, y, c1), f2 = detail::harmonic_resid(t, y, c2);
    for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
            b = c2;
            c2 = c1;
            f2 = f1;
            c1 = b - gr * (b - a);
            f1 = detail::harmonic_resid(t, y, c1);
        } else {
            a = c1;
            c1 = c2;
            f1 = f2;
            c2 = a + gr * (b - a);
            f2 = detail::harmonic_resid(t, y, c2);
        }
    }
    const double w = 0.5 * (a + b);

    double abc[3];
    const double ss = detail::harmonic_resid(t, y, w, abc);
    // a + b cos + c sin == A sin^2(wt/2 + phi) + C with
    // A = 2 sqrt(b^2+c^2), C = a - A/2, phi = atan2(c, -b)/2
    const double R = std::hypot(abc[1], abc[2]);
    RabiFit fit;
    fit.frequency = w;
    fit.amplitude = 2.0 * R;
    fit.offset = abc[0] - R;
    fit.phase = 0.5 * std::atan2(abc[2], -abc[1]);
    fit.residual = std::sqrt(ss / y.size());
    return fit;
}

} // namespace qdgate
