#include "doctest.h"

#include <random>

#include "cliffspec/boundary.hpp"
#include "cliffspec/operators_zoo.hpp"

using namespace cliffspec;

namespace {

Paravector pv(int n, std::initializer_list<double> c) {
    Paravector p(n);
    int i = 0;
    for (double v : c) p[i++] = v;
    return p;
}

CliffordVector random_vector(int n, int m, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    CliffordVector v(n, m);
    for (int i = 0; i < m; ++i)
        for (Mask a = 0; a < static_cast<Mask>(1 << n); ++a) v[i][a] = gauss(rng);
    return v;
}

CliffordOperator random_operator(int n, int m, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<Multivector> ents;
    for (int k = 0; k < m * m; ++k) {
        Multivector mv(n);
        for (Mask a = 0; a < static_cast<Mask>(1 << n); ++a) mv[a] = unif(rng);
        ents.push_back(mv);
    }
    return CliffordOperator(n, m, std::move(ents));
}

GradientModel dirichlet_model() {
    return gradient_1d(12, 1.0 / 11, preset_linear(1.0, 0.5), BcKind::dirichlet, 1.0, 2);
}

BoundarySpec selector_spec(int n, int m, std::vector<int> nodes) {
    BoundarySpec spec;
    spec.n = n;
    spec.m = m;
    spec.replace_rows = nodes;
    spec.rows.assign(nodes.size() * static_cast<std::size_t>(m), Multivector(n));
    for (std::size_t k = 0; k < nodes.size(); ++k)
        if (nodes[k] >= 0 && nodes[k] < m) spec.rows[k * m + nodes[k]] = Multivector::scalar(n, 1.0);
    return spec;
}

} // namespace

TEST_CASE("boundary spec validation") {
    BoundarySpec ok = selector_spec(2, 5, {0, 4});
    CHECK_NOTHROW(ok.validate());

    SUBCASE("duplicate replace index") {
        BoundarySpec bad = selector_spec(2, 5, {0, 0});
        CHECK_THROWS_AS(bad.validate(), ConfigError);
    }
    SUBCASE("replace index out of range") {
        BoundarySpec bad = selector_spec(2, 5, {0, 5});
        CHECK_THROWS_AS(bad.validate(), ConfigError);
    }
    SUBCASE("rank-deficient constraint map") {
        BoundarySpec bad = selector_spec(2, 5, {0, 4});
        bad.rows[1 * 5 + 4] = Multivector(2);
        bad.rows[1 * 5 + 0] = Multivector::scalar(2, 1.0);  // duplicates row 0
        CHECK_THROWS_AS(bad.validate(), ConfigError);
    }
    SUBCASE("apply computes the constraint values") {
        std::mt19937_64 rng(1);
        const CliffordVector v = random_vector(2, 5, rng);
        const CliffordVector cv = ok.apply(v);
        CHECK(modulus(cv[0] - v[0]) == 0.0);
        CHECK(modulus(cv[1] - v[4]) == 0.0);
    }
}

TEST_CASE("assemble") {
    const int n = 2, m = 3;
    SUBCASE("algebraic mode with T = 0 and |s| = 1 gives the identity") {
        const auto R = ConstrainedResolvent::assemble(CliffordOperator::zero(n, m),
                                                      pv(n, {0, 1, 0}), BoundarySpec::none(n, m));
        CHECK((R.system_matrix() - Eigen::MatrixXd::Identity(m << n, m << n)).norm() == 0.0);
    }
    SUBCASE("algebraic mode reproduces the representation of Q entrywise") {
        std::mt19937_64 rng(2);
        const CliffordOperator T = random_operator(n, m, rng);
        const Paravector s = pv(n, {0.2, 3.7, 1.1});
        CHECK((assembled_matrix(T, s, BoundarySpec::none(n, m)) - build_Q(T, s).real_rep())
                  .norm() == 0.0);
    }
    SUBCASE("Dirichlet model is invertible far from the real axis") {
        const GradientModel g = dirichlet_model();
        const Eigen::MatrixXd M = assembled_matrix(g.T, pv(2, {0, 10, 0}), g.spec);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        const auto& sv = svd.singularValues();
        CHECK(sv(sv.size() - 1) > 1e-10 * sv(0));
        CHECK_NOTHROW(ConstrainedResolvent::assemble(g.T, pv(2, {0, 10, 0}), g.spec));
    }
    SUBCASE("a point on the singular locus throws with the margin attached") {
        const Paravector p = pv(n, {1, 1, 0});
        const CliffordOperator T = mult_operator(p, m);
        try {
            ConstrainedResolvent::assemble(T, p, BoundarySpec::none(n, m));
            FAIL("expected SingularSystem");
        } catch (const SingularSystem& e) {
            CHECK(e.sigma_min <= 1e-10 * e.sigma_max);
        }
    }
}

TEST_CASE("constrained solve") {
    const int n = 2;
    std::mt19937_64 rng(3);

    SUBCASE("T = 0 divides by |s|^2") {
        const int m = 4;
        const Paravector s = pv(n, {1, 2, 0});
        const auto R = ConstrainedResolvent::assemble(CliffordOperator::zero(n, m), s,
                                                      BoundarySpec::none(n, m));
        const CliffordVector f = random_vector(n, m, rng);
        const CliffordVector u = R.solve(f);
        CHECK((u - f * (1.0 / modulus_sq(s))).norm() <= 1e-13 * f.norm());
    }
    SUBCASE("multiplication operator inverts through the slice polynomial") {
        const Paravector p = pv(n, {0.3, 0.8, -0.4});
        const Paravector s = pv(n, {1.5, 2.0, 0});
        const int m = 3;
        const auto R =
            ConstrainedResolvent::assemble(mult_operator(p, m), s, BoundarySpec::none(n, m));
        const Multivector p_mv = p.to_multivector();
        const Multivector poly = p_mv * p_mv - 2.0 * s.real_part() * p_mv +
                                 Multivector::scalar(n, modulus_sq(s));
        const Eigen::MatrixXd block_inv = lmul_matrix(poly).inverse();
        const CliffordVector f = random_vector(n, m, rng);
        const Eigen::VectorXd uf = flatten(R.solve(f));
        for (int i = 0; i < m; ++i) {
            const Eigen::VectorXd expect = block_inv * flatten(f).segment(i << n, 1 << n);
            CHECK((uf.segment(i << n, 1 << n) - expect).norm() <= 1e-12 * expect.norm());
        }
    }
    SUBCASE("Dirichlet solutions satisfy the constraints and the interior rows") {
        const GradientModel g = dirichlet_model();
        const auto R = ConstrainedResolvent::assemble(g.T, pv(2, {1, 2, 0}), g.spec);
        const Eigen::MatrixXd qrep = build_Q(g.T, R.s()).real_rep();
        for (int t = 0; t < 5; ++t) {
            const CliffordVector f = random_vector(2, 12, rng);
            const CliffordVector u = R.solve(f);
            CHECK(g.spec.apply(u).norm() <= 1e-12 * std::max(1.0, u.norm()));
            const Eigen::VectorXd resid =
                R.project_interior(qrep * flatten(u) - flatten(f));
            CHECK(resid.norm() <= 1e-10 * f.norm());
        }
    }
    SUBCASE("q_inv is a right-module map") {
        const GradientModel g = dirichlet_model();
        const auto R = ConstrainedResolvent::assemble(g.T, pv(2, {1, 2, 0}), g.spec);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        for (int t = 0; t < 5; ++t) {
            const CliffordVector f = random_vector(2, 12, rng);
            Multivector s(2);
            for (Mask a = 0; a < 4; ++a) s[a] = unif(rng);
            const CliffordVector lhs = R.solve(f * s);
            const CliffordVector rhs = R.solve(f) * s;
            CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()));
        }
    }
    SUBCASE("membership margin is independent of the slice axis") {
        const GradientModel g = dirichlet_model();
        const auto js = sample_sphere(2, 11, 4);
        for (auto [x, y] : std::vector<std::pair<double, double>>{{1, 2}, {0.3, 1.4}}) {
            double ref = -1;
            for (const auto& j : js) {
                const double smin =
                    singular_extent(assembled_matrix(g.T, slice_compose(2, x, y, j), g.spec)).first;
                if (ref < 0)
                    ref = smin;
                else
                    CHECK(std::abs(smin - ref) <= 1e-10 * ref);
            }
        }
    }
}

TEST_CASE("commutator") {
    const int n = 2;
    std::mt19937_64 rng(4);

    SUBCASE("vanishes in algebraic mode") {
        const CliffordOperator T = random_operator(n, 4, rng);
        const auto R =
            ConstrainedResolvent::assemble(T, pv(n, {0, 40, 0}), BoundarySpec::none(n, 4));
        const double scale = (R.op_matrix() * R.qinv_matrix()).norm();
        CHECK(commutator_matrix(R).norm() <= 1e-10 * scale);
    }
    SUBCASE("vanishes for a multiplication operator under node-selector constraints") {
        const Paravector p = pv(n, {0.5, 1.2, 0});
        const int m = 6;
        const auto R = ConstrainedResolvent::assemble(mult_operator(p, m), pv(n, {2, 1, 0}),
                                                      selector_spec(n, m, {0, m - 1}));
        const CliffordVector v = random_vector(n, m, rng);
        CHECK(commutator(R, v).norm() <= 1e-12 * v.norm());
    }
    SUBCASE("does not vanish for the Dirichlet gradient") {
        const GradientModel g = dirichlet_model();
        const auto R = ConstrainedResolvent::assemble(g.T, pv(2, {1, 2, 0}), g.spec);
        const CliffordVector v = random_vector(2, 12, rng);
        CHECK(commutator(R, v).norm() > 1e-3 * v.norm());
    }
}

TEST_CASE("commutator kernel equals its image characterization") {
    std::mt19937_64 rng(5);

    SUBCASE("algebraic mode: full space") {
        const CliffordOperator T = random_operator(2, 3, rng);
        const auto R =
            ConstrainedResolvent::assemble(T, pv(2, {0, 30, 0}), BoundarySpec::none(2, 3));
        CHECK(commutator_kernel(R).dim() == 12);
        CHECK(image_characterization(R).dim() == 12);
    }
    SUBCASE("Dirichlet model: proper subspace of the generic dimension") {
        const GradientModel g = dirichlet_model();
        const auto R = ConstrainedResolvent::assemble(g.T, pv(2, {1, 2, 0}), g.spec);
        const Subspace ker = commutator_kernel(R);
        const Subspace img = image_characterization(R);
        CHECK(ker.dim() == (12 - 4) * 4);  // (m - 2b) * 2^n
        CHECK(img.dim() == ker.dim());
        CHECK(max_principal_angle(ker, img) < 1e-7);
    }
    SUBCASE("Robin model") {
        const GradientModel g =
            gradient_1d(10, 1.0 / 9, preset_bump(0.5, 0.3), BcKind::robin, 1.0, 2);
        const auto R = ConstrainedResolvent::assemble(g.T, pv(2, {1, 2, 0}), g.spec);
        const Subspace ker = commutator_kernel(R);
        const Subspace img = image_characterization(R);
        CHECK(ker.dim() == img.dim());
        CHECK(max_principal_angle(ker, img) < 1e-7);
    }
    SUBCASE("2D model: kernel = image plus stencil-shadow directions") {
        // boundary columns that no interior stencil row reads contribute
        // commutator-kernel directions beyond the image; the kernel splits
        // exactly into the two pieces
        const GradientModel g2 = gradient_2d(5, 5, 0.25, preset_linear(1.0, 0.5),
                                             preset_constant(1.0), BcKind::dirichlet, 1.0, 2);
        const auto R = ConstrainedResolvent::assemble(g2.T, pv(2, {1, 2, 0}), g2.spec);
        const Subspace ker = commutator_kernel(R);
        const Subspace img = image_characterization(R);
        const Eigen::Index N = R.size();
        Eigen::MatrixXd stacked(2 * N, N);
        stacked.topRows(N) = Eigen::MatrixXd(R.pi_diagonal().asDiagonal());
        stacked.bottomRows(N) = R.pi_diagonal().asDiagonal() * R.op_matrix();
        const Subspace shadow = nullspace(stacked);
        CHECK(ker.dim() == img.dim() + shadow.dim());
        auto contained = [](const Subspace& small, const Subspace& big) {
            const Eigen::MatrixXd resid =
                small.basis - big.basis * (big.basis.transpose() * small.basis);
            Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid);
            return svd.singularValues()(0);
        };
        CHECK(contained(img, ker) < 1e-10);
        CHECK(contained(shadow, ker) < 1e-10);
    }
}

TEST_CASE("subspace tools") {
    SUBCASE("nullspace of a rank-one matrix") {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
        A(0, 0) = 2.0;
        const Subspace ns = nullspace(A);
        CHECK(ns.dim() == 2);
        CHECK((A * ns.basis).norm() <= 1e-14);
        CHECK((ns.basis.transpose() * ns.basis - Eigen::MatrixXd::Identity(2, 2)).norm() <= 1e-10);
    }
    SUBCASE("principal angle of rotated lines") {
        const double theta = 0.3;
        Subspace a{Eigen::MatrixXd::Zero(2, 1), 1e-8};
        a.basis(0, 0) = 1.0;
        Subspace b{Eigen::MatrixXd::Zero(2, 1), 1e-8};
        b.basis(0, 0) = std::cos(theta);
        b.basis(1, 0) = std::sin(theta);
        CHECK(max_principal_angle(a, b) == doctest::Approx(theta).epsilon(1e-12));
    }
    SUBCASE("mismatched dimensions give a right angle") {
        Subspace a{Eigen::MatrixXd::Identity(3, 2), 1e-8};
        Subspace b{Eigen::MatrixXd::Identity(3, 3), 1e-8};
        CHECK(max_principal_angle(a, b) == doctest::Approx(std::asin(1.0)));
    }
}
