#include "doctest.h"

#include <random>

#include "cliffspec/module.hpp"

using namespace cliffspec;

namespace {

Multivector random_multivector(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Multivector m(n);
    for (Mask a = 0; a < static_cast<Mask>(m.dim()); ++a) m[a] = d(rng);
    return m;
}

Paravector random_paravector(int n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Paravector p(n);
    for (int i = 0; i <= n; ++i) p[i] = d(rng);
    return p;
}

CliffordVector random_vector(int n, int m, std::mt19937_64& rng) {
    CliffordVector v(n, m);
    for (int i = 0; i < m; ++i) v[i] = random_multivector(n, rng);
    return v;
}

CliffordOperator random_operator(int n, int m, std::mt19937_64& rng) {
    std::vector<Multivector> ents;
    ents.reserve(static_cast<std::size_t>(m) * m);
    for (int k = 0; k < m * m; ++k) ents.push_back(random_multivector(n, rng));
    return CliffordOperator(n, m, std::move(ents));
}

double mat_rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-300});
}

double vec_rel(const CliffordVector& a, const CliffordVector& b) {
    return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-300});
}

} // namespace

TEST_CASE("right scalar multiplication: example and norm laws") {
    const int n = 2;
    CliffordVector v(n, 2);
    v[0] = Multivector::scalar(n, 1.0);
    const CliffordVector vs = v * Multivector::unit(n, 1);
    CHECK(vs[0] == Multivector::unit(n, 1));
    CHECK(modulus(vs[1]) == 0.0);

    std::mt19937_64 rng(21);
    SUBCASE("paravector scalars scale the norm exactly") {
        for (int trial = 0; trial < 100; ++trial) {
            const int nn = 1 + static_cast<int>(rng() % 4);
            const int m = 1 + static_cast<int>(rng() % 5);
            const CliffordVector w = random_vector(nn, m, rng);
            const Paravector s = random_paravector(nn, rng);
            const double expect = modulus(s) * w.norm();
            CHECK((w * s.to_multivector()).norm() ==
                  doctest::Approx(expect).epsilon(1e-12));
            CHECK((s.to_multivector() * w).norm() ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
    SUBCASE("general Clifford scalars obey the 2^(n/2) bound") {
        for (int trial = 0; trial < 100; ++trial) {
            const int nn = 1 + static_cast<int>(rng() % 4);
            const int m = 1 + static_cast<int>(rng() % 5);
            const CliffordVector w = random_vector(nn, m, rng);
            const Multivector s = random_multivector(nn, rng);
            const double bound =
                std::pow(2.0, nn / 2.0) * modulus(s) * w.norm() * (1.0 + 1e-12);
            CHECK((w * s).norm() <= bound);
            CHECK((s * w).norm() <= bound);
        }
    }
}

TEST_CASE("operator application") {
    const int n = 2;
    std::mt19937_64 rng(8);

    SUBCASE("identity acts as identity") {
        const CliffordVector v = random_vector(n, 4, rng);
        CHECK(vec_rel(apply(CliffordOperator::identity(n, 4), v), v) == 0.0);
    }
    SUBCASE("single e_1 entry squares to -1") {
        std::vector<Multivector> ents{Multivector::unit(n, 1)};
        const CliffordOperator T(n, 1, std::move(ents));
        CliffordVector v(n, 1);
        v[0] = Multivector::unit(n, 1);
        const CliffordVector tv = apply(T, v);
        CHECK(tv[0] == Multivector::scalar(n, -1.0));
    }
    SUBCASE("right-linearity over Clifford scalars") {
        for (int trial = 0; trial < 50; ++trial) {
            const CliffordOperator T = random_operator(n, 3, rng);
            const CliffordVector v = random_vector(n, 3, rng);
            const Multivector s = random_multivector(n, rng);
            CHECK(vec_rel(apply(T, v * s), apply(T, v) * s) <= 1e-12);
        }
    }
}

TEST_CASE("real representation") {
    SUBCASE("size is 2^n * m") {
        const CliffordOperator T = CliffordOperator::zero(2, 3);
        CHECK(T.real_rep().rows() == 12);
        CHECK(T.real_rep().cols() == 12);
    }
    SUBCASE("left multiplication by e_1 on (R_1)^1 is the rotation matrix") {
        // basis {1, e_1}: e_1 * 1 = e_1, e_1 * e_1 = -1
        std::vector<Multivector> ents{Multivector::unit(1, 1)};
        const CliffordOperator T(1, 1, std::move(ents));
        Eigen::MatrixXd expected(2, 2);
        expected << 0, -1, 1, 0;
        CHECK(mat_rel(T.real_rep(), expected) == 0.0);
    }
    SUBCASE("multiplicative and unital") {
        std::mt19937_64 rng(4);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 3);
            const int m = 1 + static_cast<int>(rng() % 4);
            const CliffordOperator A = random_operator(n, m, rng);
            const CliffordOperator B = random_operator(n, m, rng);
            CHECK(mat_rel(compose(A, B).real_rep(), A.real_rep() * B.real_rep()) <= 1e-13);
            CHECK(mat_rel(CliffordOperator::identity(n, m).real_rep(),
                          Eigen::MatrixXd::Identity(m << n, m << n)) == 0.0);
        }
    }
    SUBCASE("apply agrees with the flattened matrix action") {
        std::mt19937_64 rng(12);
        for (int trial = 0; trial < 50; ++trial) {
            const int n = 1 + static_cast<int>(rng() % 3);
            const int m = 1 + static_cast<int>(rng() % 5);
            const CliffordOperator T = random_operator(n, m, rng);
            const CliffordVector v = random_vector(n, m, rng);
            const Eigen::VectorXd direct = flatten(apply(T, v));
            const Eigen::VectorXd via_rep = T.real_rep() * flatten(v);
            CHECK((direct - via_rep).norm() <= 1e-12 * std::max(1.0, direct.norm()));
        }
    }
}

TEST_CASE("flatten round trip") {
    std::mt19937_64 rng(3);
    const CliffordVector v = random_vector(3, 4, rng);
    CHECK(vec_rel(unflatten(3, 4, flatten(v)), v) == 0.0);
}

TEST_CASE("build_Q") {
    std::mt19937_64 rng(42);
    const int n = 2, m = 3;

    SUBCASE("zero operator gives |s|^2 I") {
        const Paravector s = random_paravector(n, rng);
        const CliffordOperator q = build_Q(CliffordOperator::zero(n, m), s);
        CHECK(mat_rel(q.real_rep(),
                      modulus_sq(s) * Eigen::MatrixXd::Identity(m << n, m << n)) <= 1e-15);
    }
    SUBCASE("real s: Q equals (T - sI)^2") {
        for (int trial = 0; trial < 20; ++trial) {
            const CliffordOperator T = random_operator(n, m, rng);
            const double x = 0.3 + trial * 0.1;
            const Paravector s = Paravector::real(n, x);
            const CliffordOperator shifted = T - x * CliffordOperator::identity(n, m);
            CHECK(mat_rel(build_Q(T, s).real_rep(), compose(shifted, shifted).real_rep()) <= 1e-12);
        }
    }
    SUBCASE("depends on s only through the sphere [s]") {
        const CliffordOperator T = random_operator(n, m, rng);
        Paravector s1(n), s2(n);
        s1[0] = 0.5;
        s1[1] = 1.25;
        s2[0] = 0.5;
        s2[2] = 1.25;
        CHECK(mat_rel(build_Q(T, s1).real_rep(), build_Q(T, s2).real_rep()) == 0.0);
    }
}

TEST_CASE("mult_operator") {
    const int n = 2;
    std::mt19937_64 rng(77);

    SUBCASE("zero paravector gives the zero operator") {
        const CliffordOperator T = mult_operator(Paravector(n), 3);
        CHECK(T.real_rep().norm() == 0.0);
    }
    SUBCASE("acts on the unit vector as p") {
        const Paravector p = random_paravector(n, rng);
        CliffordVector v(n, 1);
        v[0] = Multivector::scalar(n, 1.0);
        const CliffordVector pv = apply(mult_operator(p, 1), v);
        CHECK(modulus(pv[0] - p.to_multivector()) == 0.0);
    }
    SUBCASE("Q of a multiplication operator is left multiplication by the slice polynomial") {
        for (int trial = 0; trial < 20; ++trial) {
            const Paravector p = random_paravector(n, rng);
            const Paravector s = random_paravector(n, rng);
            const int m = 1 + static_cast<int>(rng() % 3);
            const Multivector p_mv = p.to_multivector();
            const Multivector poly = p_mv * p_mv - 2.0 * s.real_part() * p_mv +
                                     Multivector::scalar(n, modulus_sq(s));
            CHECK(mat_rel(build_Q(mult_operator(p, m), s).real_rep(), left_mul_rep(poly, m)) <=
                  1e-13);
        }
    }
}

TEST_CASE("block_diag joins spectra building blocks") {
    const int n = 2;
    Paravector p(n), r(n);
    p[0] = 1;
    p[1] = 1;
    r[2] = 2;
    const CliffordOperator blk = block_diag(mult_operator(p, 2), mult_operator(r, 1));
    CHECK(blk.m() == 3);
    CHECK(modulus(blk.entry(0, 0) - p.to_multivector()) == 0.0);
    CHECK(modulus(blk.entry(2, 2) - r.to_multivector()) == 0.0);
    CHECK(modulus(blk.entry(0, 2)) == 0.0);
}
