#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "qdgate/errors.hpp"

// Truncated product space of two two-level dots and one cavity mode.
// Basis kets |q1 q2, n> with q1, q2 in {0,1} and photon number n <= n_max,
// ordered lexicographically in (q1, q2, n):
//
//   flat = (2*q1 + q2) * (n_max + 1) + n
//
// The ordering is frozen; file outputs and gate matrices depend on it.

namespace qdgate {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

struct BasisIndex {
    int q1 = 0;
    int q2 = 0;
    int n = 0;
};

inline int dim(int n_max) {
    if (n_max < 0) throw std::invalid_argument("dim: n_max must be >= 0");
    return 4 * (n_max + 1);
}

inline int index_of(const BasisIndex& b, int n_max) {
    if (b.q1 < 0 || b.q1 > 1 || b.q2 < 0 || b.q2 > 1)
        throw std::invalid_argument("index_of: dot levels must be 0 or 1");
    if (b.n < 0 || b.n > n_max)
        throw std::invalid_argument("index_of: photon number out of range");
    return (2 * b.q1 + b.q2) * (n_max + 1) + b.n;
}

inline BasisIndex state_of(int flat, int n_max) {
    if (flat < 0 || flat >= dim(n_max))
        throw std::invalid_argument("state_of: flat index out of range");
    const int block = n_max + 1;
    BasisIndex b;
    b.n = flat % block;
    const int qq = flat / block;
    b.q1 = qq >> 1;
    b.q2 = qq & 1;
    return b;
}

struct StateVector {
    Vec amplitudes;
    int n_max = 0;

    static StateVector basis_state(const BasisIndex& b, int n_max) {
        StateVector s;
        s.n_max = n_max;
        s.amplitudes = Vec::Zero(dim(n_max));
        s.amplitudes[index_of(b, n_max)] = 1.0;
        return s;
    }
    double squared_norm() const { return amplitudes.squaredNorm(); }
};

struct OperatorMatrix {
    Mat entries;
    bool hermitian_flag = false; // set only when construction guarantees H = H^dag exactly
};

// a |q1 q2, n> = sqrt(n) |q1 q2, n-1>. n_max = 0 gives the zero operator.
inline OperatorMatrix annihilation(int n_max) {
    const int d = dim(n_max);
    OperatorMatrix op{Mat::Zero(d, d), false};
    for (int qq = 0; qq < 4; ++qq)
        for (int n = 1; n <= n_max; ++n) {
            const int row = qq * (n_max + 1) + (n - 1);
            const int col = qq * (n_max + 1) + n;
            op.entries(row, col) = std::sqrt(double(n));
        }
    return op;
}

inline OperatorMatrix creation(int n_max) {
    OperatorMatrix a = annihilation(n_max);
    return {a.entries.adjoint(), false};
}

// sigma_{j,ab} = |a><b| on dot j (j in {1,2}), identity elsewhere.
inline OperatorMatrix dot_transition(int j, int a, int b, int n_max) {
    if (j != 1 && j != 2) throw std::invalid_argument("dot_transition: j must be 1 or 2");
    if (a < 0 || a > 1 || b < 0 || b > 1)
        throw std::invalid_argument("dot_transition: levels must be 0 or 1");
    const int d = dim(n_max);
    OperatorMatrix op{Mat::Zero(d, d), false};
    for (int qq = 0; qq < 4; ++qq) {
        const int q1 = qq >> 1, q2 = qq & 1;
        const int qj = (j == 1) ? q1 : q2;
        if (qj != b) continue;
        const int q1n = (j == 1) ? a : q1;
        const int q2n = (j == 2) ? a : q2;
        for (int n = 0; n <= n_max; ++n) {
            const int row = (2 * q1n + q2n) * (n_max + 1) + n;
            const int col = qq * (n_max + 1) + n;
            op.entries(row, col) = 1.0;
        }
    }
    return op;
}

using BasisFilter = std::function<bool(const BasisIndex&)>;

inline double population(const StateVector& psi, const BasisFilter& keep) {
    double p = 0.0;
    for (int i = 0; i < psi.amplitudes.size(); ++i)
        if (keep(state_of(i, psi.n_max))) p += std::norm(psi.amplitudes[i]);
    return p;
}

// Population of one (q1,q2) class, summed over photon number.
inline double population_qq(const StateVector& psi, int q1, int q2) {
    const int block = psi.n_max + 1;
    const int off = (2 * q1 + q2) * block;
    double p = 0.0;
    for (int n = 0; n < block; ++n) p += std::norm(psi.amplitudes[off + n]);
    return p;
}

inline double photon_expectation(const Vec& amps, int n_max) {
    const int block = n_max + 1;
    double e = 0.0;
    for (int qq = 0; qq < 4; ++qq)
        for (int n = 1; n < block; ++n) e += n * std::norm(amps[qq * block + n]);
    return e;
}

} // namespace qdgate
