#include <catch2/catch_amalgamated.hpp>

#include "qdgate/fockspace.hpp"

using namespace qdgate;

TEST_CASE("dimension of the truncated space") {
    CHECK(dim(0) == 4);
    CHECK(dim(2) == 12);
    CHECK(dim(10) == 44);
    CHECK_THROWS_AS(dim(-1), std::invalid_argument);
}

TEST_CASE("flat index round-trips at every truncation up to 64") {
    for (int n_max : {0, 1, 2, 5, 11, 31, 64}) {
        for (int i = 0; i < dim(n_max); ++i) {
            const BasisIndex b = state_of(i, n_max);
            CHECK(index_of(b, n_max) == i);
        }
    }
    // ordering is lexicographic in (q1, q2, n)
    CHECK(index_of({0, 0, 0}, 2) == 0);
    CHECK(index_of({0, 1, 0}, 2) == 3);
    CHECK(index_of({1, 0, 2}, 2) == 8);
    CHECK(index_of({1, 1, 2}, 2) == 11);
    CHECK_THROWS_AS(index_of({0, 0, 3}, 2), std::invalid_argument);
    CHECK_THROWS_AS(index_of({2, 0, 0}, 2), std::invalid_argument);
    CHECK_THROWS_AS(state_of(12, 2), std::invalid_argument);
}

TEST_CASE("annihilation operator ladder action") {
    const int n_max = 4;
    const Mat a = annihilation(n_max).entries;

    StateVector s = StateVector::basis_state({0, 1, 2}, n_max);
    Vec out = a * s.amplitudes;
    Vec want = std::sqrt(2.0) * StateVector::basis_state({0, 1, 1}, n_max).amplitudes;
    CHECK((out - want).norm() == 0.0);

    StateVector vac = StateVector::basis_state({0, 0, 0}, n_max);
    CHECK((a * vac.amplitudes).norm() == 0.0);

    StateVector three = StateVector::basis_state({1, 1, 3}, n_max);
    const Mat num = a.adjoint() * a;
    const cplx expect = three.amplitudes.dot(num * three.amplitudes);
    CHECK(expect.real() == Catch::Approx(3.0).margin(1e-14));
    CHECK(expect.imag() == 0.0);
}

TEST_CASE("creation is the exact adjoint and the commutator is identity below the cap") {
    const int n_max = 6;
    const Mat a = annihilation(n_max).entries;
    const Mat ad = creation(n_max).entries;
    CHECK((ad - a.adjoint()).cwiseAbs().maxCoeff() == 0.0);

    const Mat comm = a * ad - ad * a;
    for (int qq = 0; qq < 4; ++qq)
        for (int n = 0; n < n_max; ++n) {
            const int i = qq * (n_max + 1) + n;
            CHECK(std::abs(comm(i, i) - 1.0) < 1e-14);
        }
    // the truncated corner is the one place the commutator cannot be 1
    CHECK(std::abs(comm(n_max, n_max) + double(n_max)) < 1e-12);
}

TEST_CASE("annihilation at n_max = 0 is the zero operator") {
    CHECK(annihilation(0).entries.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("dot transition operators") {
    const int n_max = 3;
    const Mat s101 = dot_transition(1, 0, 1, n_max).entries;
    const Mat s211 = dot_transition(2, 1, 1, n_max).entries;

    for (int n = 0; n <= n_max; ++n) {
        Vec in = StateVector::basis_state({1, 0, n}, n_max).amplitudes;
        Vec want = StateVector::basis_state({0, 0, n}, n_max).amplitudes;
        CHECK((s101 * in - want).norm() == 0.0);

        Vec blocked = StateVector::basis_state({0, 1, n}, n_max).amplitudes;
        CHECK((s101 * blocked).norm() == 0.0);
        CHECK((s211 * blocked - blocked).norm() == 0.0);
    }
    CHECK_THROWS_AS(dot_transition(3, 0, 1, n_max), std::invalid_argument);
    CHECK_THROWS_AS(dot_transition(1, 2, 0, n_max), std::invalid_argument);
}

TEST_CASE("dot operator algebra") {
    const int n_max = 2;
    const int d = dim(n_max);
    for (int j : {1, 2}) {
        const Mat s01 = dot_transition(j, 0, 1, n_max).entries;
        const Mat s10 = dot_transition(j, 1, 0, n_max).entries;
        const Mat s00 = dot_transition(j, 0, 0, n_max).entries;
        const Mat s11 = dot_transition(j, 1, 1, n_max).entries;
        CHECK((s01 * s10 - s00).cwiseAbs().maxCoeff() == 0.0);
        CHECK((s00 + s11 - Mat::Identity(d, d)).cwiseAbs().maxCoeff() == 0.0);
        CHECK((s01 - s10.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("population filters") {
    const int n_max = 4;
    StateVector s = StateVector::basis_state({0, 1, 2}, n_max);
    auto is01 = [](const BasisIndex& b) { return b.q1 == 0 && b.q2 == 1; };
    auto is10 = [](const BasisIndex& b) { return b.q1 == 1 && b.q2 == 0; };
    CHECK(population(s, is01) == 1.0);
    CHECK(population(s, is10) == 0.0);

    StateVector sup;
    sup.n_max = n_max;
    sup.amplitudes = (StateVector::basis_state({0, 1, 2}, n_max).amplitudes +
                      StateVector::basis_state({1, 0, 2}, n_max).amplitudes) /
                     std::sqrt(2.0);
    CHECK(population(sup, is01) == Catch::Approx(0.5).margin(1e-15));
    CHECK(population_qq(sup, 1, 0) == Catch::Approx(0.5).margin(1e-15));

    // the four class populations add up to the squared norm
    double total = 0.0;
    for (int q1 : {0, 1})
        for (int q2 : {0, 1}) total += population_qq(sup, q1, q2);
    CHECK(total == Catch::Approx(sup.squared_norm()).margin(1e-15));

    CHECK(photon_expectation(sup.amplitudes, n_max) == Catch::Approx(2.0).margin(1e-14));
}
