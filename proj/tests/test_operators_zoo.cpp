#include "doctest.h"

#include <cmath>
#include <random>

#include "cliffspec/operators_zoo.hpp"

using namespace cliffspec;

namespace {

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

} // namespace

TEST_CASE("1D gradient stencils") {
    const int m = 9;
    const double h = 0.125;
    const GradientModel g = gradient_1d(m, h, preset_constant(1.0), BcKind::dirichlet, 1.0, 2);

    SUBCASE("interior rows are centered differences on e_1") {
        for (int i = 1; i + 1 < m; ++i) {
            CHECK(g.T.entry(i, i + 1)[0b01] == doctest::Approx(1.0 / (2 * h)));
            CHECK(g.T.entry(i, i - 1)[0b01] == doctest::Approx(-1.0 / (2 * h)));
            CHECK(modulus(g.T.entry(i, i)) == 0.0);
        }
    }
    SUBCASE("composition gives the wide second-difference stencil") {
        const CliffordOperator t2 = compose(g.T, g.T);
        const double w = 1.0 / (4 * h * h);
        for (int i = 2; i + 2 < m; ++i) {
            CHECK(t2.entry(i, i - 2)[0] == doctest::Approx(-w));
            CHECK(t2.entry(i, i + 2)[0] == doctest::Approx(-w));
            CHECK(t2.entry(i, i)[0] == doctest::Approx(2 * w));
            CHECK(modulus(t2.entry(i, i) - Multivector::scalar(2, t2.entry(i, i)[0])) == 0.0);
        }
    }
    SUBCASE("Dirichlet constraints select the end nodes") {
        CHECK(g.spec.b() == 2);
        CHECK(g.spec.replace_rows == std::vector<int>{0, m - 1});
        CHECK(modulus(g.spec.entry(0, 0) - Multivector::scalar(2, 1.0)) == 0.0);
        CHECK(modulus(g.spec.entry(1, m - 1) - Multivector::scalar(2, 1.0)) == 0.0);
    }
}

TEST_CASE("1D gradient validation") {
    CHECK_THROWS_AS(gradient_1d(4, 0.1, preset_constant(1.0), BcKind::dirichlet), ConfigError);
    CHECK_THROWS_AS(gradient_1d(9, 0.1, preset_constant(-1.0), BcKind::dirichlet), ConfigError);
    CHECK_THROWS_AS(gradient_1d(9, 0.1, preset_linear(0.1, -1.0), BcKind::dirichlet), ConfigError);
    CHECK_THROWS_AS(gradient_1d(9, 0.0, preset_constant(1.0), BcKind::dirichlet), ConfigError);
}

TEST_CASE("Robin-like constraints form a right submodule") {
    const GradientModel g = gradient_1d(10, 0.1, preset_bump(0.5, 0.3), BcKind::robin, 0.7, 2);
    std::mt19937_64 rng(13);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 20; ++t) {
        CliffordVector v(2, 10);
        Multivector s(2);
        for (int i = 0; i < 10; ++i)
            for (Mask a = 0; a < 4; ++a) v[i][a] = gauss(rng);
        for (Mask a = 0; a < 4; ++a) s[a] = gauss(rng);
        const CliffordVector lhs = g.spec.apply(v * s);
        const CliffordVector rhs = g.spec.apply(v) * s;
        CHECK((lhs - rhs).norm() <= 1e-12 * std::max(1.0, rhs.norm()));
    }
    SUBCASE("constraint rows combine the node value with the outgoing stencil") {
        CHECK(g.spec.entry(0, 0)[0] == doctest::Approx(1.0));   // the identity part
        CHECK(g.spec.entry(0, 1)[0b01] != 0.0);                 // alpha * a * stencil on e_1
    }
}

TEST_CASE("2D gradient tensor structure") {
    const int nx = 5, ny = 6;
    const double h = 0.2;
    const GradientModel g =
        gradient_2d(nx, ny, h, preset_constant(1.0), preset_constant(1.0), BcKind::dirichlet, 1.0, 2);

    SUBCASE("T = e_1 Dx + e_2 Dy with commuting difference matrices") {
        const Eigen::MatrixXd dx1 = difference_matrix_1d(nx, h);
        const Eigen::MatrixXd dy1 = difference_matrix_1d(ny, h);
        const Eigen::MatrixXd dx = kron(Eigen::MatrixXd::Identity(ny, ny), dx1);
        const Eigen::MatrixXd dy = kron(dy1, Eigen::MatrixXd::Identity(nx, nx));
        CHECK((dx * dy - dy * dx).norm() == 0.0);

        const CliffordOperator t2 = compose(g.T, g.T);
        const Eigen::MatrixXd lap = -(dx * dx + dy * dy);
        for (int i = 0; i < nx * ny; ++i)
            for (int j = 0; j < nx * ny; ++j) {
                CHECK(t2.entry(i, j)[0] == doctest::Approx(lap(i, j)).epsilon(1e-12));
                CHECK(t2.entry(i, j)[0b11] == doctest::Approx(0.0));  // e_1 e_2 part cancels
            }
    }
    SUBCASE("constraints cover exactly the edge nodes") {
        CHECK(g.spec.b() == 2 * nx + 2 * ny - 4);
    }
}

TEST_CASE("imaginary-axis margin growth is monotone in t") {
    const GradientModel g =
        gradient_1d(12, 1.0 / 11, preset_constant(1.0), BcKind::dirichlet, 1.0, 2);
    double prev = 0;
    for (double t : {10.0, 20.0, 40.0}) {
        Paravector s(2);
        s[1] = t;
        const double smin = singular_extent(assembled_matrix(g.T, s, g.spec)).first;
        CHECK(smin >= prev);
        prev = smin;
    }
}

TEST_CASE("centered stencils converge at second order on smooth data") {
    auto interior_error = [](int m) {
        const double h = 1.0 / (m - 1);
        const GradientModel g = gradient_1d(m, h, preset_linear(1.0, 0.5), BcKind::dirichlet, 1.0, 2);
        CliffordVector u(2, m);
        for (int i = 0; i < m; ++i) u[i] = Multivector::scalar(2, std::sin(2 * M_PI * i * h));
        const CliffordVector tu = apply(g.T, u);
        double worst = 0;
        for (int i = 1; i + 1 < m; ++i) {
            const double exact = (1.0 + 0.5 * i * h) * 2 * M_PI * std::cos(2 * M_PI * i * h);
            worst = std::max(worst, std::abs(tu[i][0b01] - exact));
        }
        return worst;
    };
    const double e1 = interior_error(21);
    const double e2 = interior_error(41);
    const double order = std::log2(e1 / e2);
    CHECK(order >= 1.9);
}

TEST_CASE("known-answer suite") {
    const auto suite = known_answer_suite();
    REQUIRE(suite.size() == 3);

    CHECK(suite[0].loci == std::vector<std::pair<double, double>>{{1.0, 1.0}});
    CHECK(suite[1].T.real_rep().norm() == 0.0);
    CHECK(suite[1].loci == std::vector<std::pair<double, double>>{{0.0, 0.0}});
    CHECK(suite[2].loci.size() == 2);

    SUBCASE("block operator is singular exactly on the union of loci") {
        const KnownAnswer& blk = suite[2];
        for (const auto& [x, y] : blk.loci) {
            Paravector s(2);
            s[0] = x;
            s[1] = y;
            const double smin = singular_extent(assembled_matrix(blk.T, s, blk.spec)).first;
            CHECK(smin <= 1e-12);
        }
        Paravector off(2);
        off[0] = 2.0;
        off[1] = 0.3;
        CHECK(singular_extent(assembled_matrix(blk.T, off, blk.spec)).first > 0.1);
    }
}
