#include "cliffspec/operators_zoo.hpp"

#include <cmath>

namespace cliffspec {

Coefficient preset_constant(double c) {
    return [c](double) { return c; };
}

Coefficient preset_linear(double a, double b) {
    return [a, b](double x) { return a + b * x; };
}

Coefficient preset_bump(double center, double width) {
    return [center, width](double x) {
        const double t = (x - center) / width;
        return 1.0 + std::exp(-t * t);
    };
}

Eigen::MatrixXd difference_matrix_1d(int m, double h) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, m);
    const double inv2h = 1.0 / (2.0 * h);
    d(0, 0) = -3.0 * inv2h;
    d(0, 1) = 4.0 * inv2h;
    d(0, 2) = -1.0 * inv2h;
    for (int i = 1; i + 1 < m; ++i) {
        d(i, i - 1) = -inv2h;
        d(i, i + 1) = inv2h;
    }
    d(m - 1, m - 1) = 3.0 * inv2h;
    d(m - 1, m - 2) = -4.0 * inv2h;
    d(m - 1, m - 3) = 1.0 * inv2h;
    return d;
}

namespace {

/// Constraint rows at the given nodes: Dirichlet selects the node value,
/// Robin-like takes the row of I + alpha T there. Both have left Clifford
/// coefficients, so ker C is a right submodule.
BoundarySpec make_spec(const CliffordOperator& T, const std::vector<int>& nodes, BcKind bc,
                       double alpha) {
    const int n = T.n();
    const int m = T.m();
    BoundarySpec spec;
    spec.n = n;
    spec.m = m;
    spec.replace_rows = nodes;
    spec.rows.assign(static_cast<std::size_t>(nodes.size()) * m, Multivector(n));
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const int node = nodes[k];
        if (bc == BcKind::dirichlet) {
            spec.rows[k * m + node] = Multivector::scalar(n, 1.0);
        } else {
            for (int j = 0; j < m; ++j) {
                Multivector c = T.entry(node, j) * alpha;
                if (j == node) c += Multivector::scalar(n, 1.0);
                spec.rows[k * m + j] = c;
            }
        }
    }
    return spec;
}

void check_coefficient(const std::vector<double>& samples) {
    for (double a : samples)
        if (!(a > 0.0)) throw ConfigError("gradient model: coefficient must be strictly positive");
}

} // namespace

GradientModel gradient_1d(int m_total, double h, const Coefficient& a, BcKind bc, double alpha,
                          int n_algebra) {
    if (m_total < 5) throw ConfigError("gradient_1d: needs at least 5 nodes");
    if (!(h > 0)) throw ConfigError("gradient_1d: mesh width must be positive");

    std::vector<double> coeff(static_cast<std::size_t>(m_total));
    for (int i = 0; i < m_total; ++i) coeff[static_cast<std::size_t>(i)] = a(i * h);
    check_coefficient(coeff);

    const Eigen::MatrixXd d = difference_matrix_1d(m_total, h);
    std::vector<Multivector> ents(static_cast<std::size_t>(m_total) * m_total,
                                  Multivector(n_algebra));
    for (int i = 0; i < m_total; ++i)
        for (int j = 0; j < m_total; ++j)
            if (d(i, j) != 0.0)
                ents[static_cast<std::size_t>(i) * m_total + j] =
                    Multivector::blade(n_algebra, 1u, coeff[static_cast<std::size_t>(i)] * d(i, j));

    GradientModel model;
    model.dimension = 1;
    model.n = n_algebra;
    model.sizes = {m_total};
    model.h = h;
    model.bc = bc;
    model.alpha = alpha;
    model.T = CliffordOperator(n_algebra, m_total, std::move(ents));
    model.spec = make_spec(model.T, {0, m_total - 1}, bc, alpha);
    model.name = (bc == BcKind::dirichlet ? "gradient_1d_dirichlet" : "gradient_1d_robin");
    return model;
}

GradientModel gradient_2d(int nx, int ny, double h, const Coefficient& a1, const Coefficient& a2,
                          BcKind bc, double alpha, int n_algebra) {
    if (nx < 5 || ny < 5) throw ConfigError("gradient_2d: needs at least 5 nodes per direction");
    if (!(h > 0)) throw ConfigError("gradient_2d: mesh width must be positive");
    if (n_algebra < 2) throw ConfigError("gradient_2d: algebra needs at least e_1, e_2");

    const int m = nx * ny;
    const Eigen::MatrixXd dx1 = difference_matrix_1d(nx, h);
    const Eigen::MatrixXd dy1 = difference_matrix_1d(ny, h);
    auto node = [nx](int ix, int iy) { return iy * nx + ix; };

    std::vector<double> c1(static_cast<std::size_t>(m)), c2(static_cast<std::size_t>(m));
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            c1[static_cast<std::size_t>(node(ix, iy))] = a1(ix * h);
            c2[static_cast<std::size_t>(node(ix, iy))] = a2(iy * h);
        }
    check_coefficient(c1);
    check_coefficient(c2);

    std::vector<Multivector> ents(static_cast<std::size_t>(m) * m, Multivector(n_algebra));
    auto add = [&](int i, int j, Mask blade, double v) {
        if (v != 0.0) ents[static_cast<std::size_t>(i) * m + j][blade] += v;
    };
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix) {
            const int i = node(ix, iy);
            for (int jx = 0; jx < nx; ++jx)
                add(i, node(jx, iy), 1u, c1[static_cast<std::size_t>(i)] * dx1(ix, jx));
            for (int jy = 0; jy < ny; ++jy)
                add(i, node(ix, jy), 2u, c2[static_cast<std::size_t>(i)] * dy1(iy, jy));
        }

    std::vector<int> edge;
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            if (ix == 0 || ix == nx - 1 || iy == 0 || iy == ny - 1) edge.push_back(node(ix, iy));

    GradientModel model;
    model.dimension = 2;
    model.n = n_algebra;
    model.sizes = {nx, ny};
    model.h = h;
    model.bc = bc;
    model.alpha = alpha;
    model.T = CliffordOperator(n_algebra, m, std::move(ents));
    model.spec = make_spec(model.T, edge, bc, alpha);
    model.name = (bc == BcKind::dirichlet ? "gradient_2d_dirichlet" : "gradient_2d_robin");
    return model;
}

std::vector<KnownAnswer> known_answer_suite() {
    std::vector<KnownAnswer> suite;

    Paravector p(2);
    p[0] = 1.0;
    p[1] = 1.0;
    suite.push_back({"mult_1_plus_e1", mult_operator(p, 3), BoundarySpec::none(2, 3), {{1.0, 1.0}}});

    suite.push_back({"zero_operator", CliffordOperator::zero(2, 2), BoundarySpec::none(2, 2),
                     {{0.0, 0.0}}});

    Paravector r(2);
    r[0] = 0.5;
    r[2] = 1.5;
    suite.push_back({"block_mult_pair", block_diag(mult_operator(p, 2), mult_operator(r, 2)),
                     BoundarySpec::none(2, 4),
                     {{1.0, 1.0}, {0.5, 1.5}}});
    return suite;
}

} // namespace cliffspec
