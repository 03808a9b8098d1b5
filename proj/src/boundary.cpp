#include "cliffspec/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>

namespace cliffspec {

CliffordVector BoundarySpec::apply(const CliffordVector& v) const {
    if (v.n() != n || v.m() != m) throw DimensionMismatch("BoundarySpec::apply: module mismatch");
    CliffordVector out(n, std::max(b(), 1));
    for (int k = 0; k < b(); ++k) {
        Multivector acc(n);
        for (int j = 0; j < m; ++j) acc += entry(k, j) * v[j];
        out[k] = acc;
    }
    return out;
}

Eigen::MatrixXd BoundarySpec::real_rep() const {
    const int d = 1 << n;
    Eigen::MatrixXd rep = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(b()) * d,
                                                static_cast<Eigen::Index>(m) * d);
    for (int k = 0; k < b(); ++k)
        for (int j = 0; j < m; ++j)
            rep.block(static_cast<Eigen::Index>(k) * d, static_cast<Eigen::Index>(j) * d, d, d) =
                lmul_matrix(entry(k, j));
    return rep;
}

void BoundarySpec::validate() const {
    if (algebraic()) {
        if (!rows.empty()) throw ConfigError("BoundarySpec: constraint rows without replace indices");
        return;
    }
    if (static_cast<int>(rows.size()) != b() * m)
        throw ConfigError("BoundarySpec: needs b*m constraint entries");
    std::set<int> seen;
    for (int r : replace_rows) {
        if (r < 0 || r >= m) throw ConfigError("BoundarySpec: replace index out of range");
        if (!seen.insert(r).second) throw ConfigError("BoundarySpec: duplicate replace index");
    }
    const Eigen::MatrixXd rep = real_rep();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rep.transpose());
    if (qr.rank() < rep.rows()) throw ConfigError("BoundarySpec: constraint map is row rank deficient");
}

Subspace nullspace(const Eigen::MatrixXd& A, double rel_tol) {
    const Eigen::Index cols = A.cols();
    if (A.rows() == 0 || A.size() == 0)
        return Subspace{Eigen::MatrixXd::Identity(cols, cols), rel_tol};
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    if (smax == 0.0) return Subspace{Eigen::MatrixXd::Identity(cols, cols), rel_tol};
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * smax) ++rank;
    return Subspace{svd.matrixV().rightCols(cols - rank), rel_tol};
}

double max_principal_angle(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient()) throw DimensionMismatch("principal angles: ambient mismatch");
    if (a.dim() == 0 && b.dim() == 0) return 0.0;
    if (a.dim() == 0 || b.dim() == 0) return std::asin(1.0);
    auto one_sided = [](const Subspace& u, const Subspace& v) {
        // sin of the largest angle of v against span(u)
        const Eigen::MatrixXd resid = v.basis - u.basis * (u.basis.transpose() * v.basis);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(resid);
        const double s = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
        return std::asin(std::min(1.0, s));
    };
    return std::max(one_sided(a, b), one_sided(b, a));
}

Subspace orthonormalize(const Eigen::MatrixXd& span, double rel_tol) {
    if (span.cols() == 0) return Subspace{Eigen::MatrixXd::Zero(span.rows(), 0), rel_tol};
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(span);
    qr.setThreshold(rel_tol);
    const Eigen::Index rank = qr.rank();
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(span.rows(), rank);
    return Subspace{std::move(q), rel_tol};
}

Eigen::MatrixXd assembled_matrix(const CliffordOperator& T, const Paravector& s,
                                 const BoundarySpec& spec) {
    if (T.n() != spec.n || T.m() != spec.m || T.n() != s.n())
        throw DimensionMismatch("assembled_matrix: operator/spec/point mismatch");
    Eigen::MatrixXd M = build_Q(T, s).real_rep();
    if (spec.algebraic()) return M;
    const int d = 1 << T.n();
    const Eigen::MatrixXd crep = spec.real_rep();
    for (int k = 0; k < spec.b(); ++k)
        M.middleRows(static_cast<Eigen::Index>(spec.replace_rows[static_cast<std::size_t>(k)]) * d, d) =
            crep.middleRows(static_cast<Eigen::Index>(k) * d, d);
    return M;
}

std::pair<double, double> singular_extent(const Eigen::MatrixXd& M) {
    if (M.rows() <= 32) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        const auto& sv = svd.singularValues();
        return {sv(sv.size() - 1), sv(0)};
    }
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M);
    const auto& sv = svd.singularValues();
    return {sv(sv.size() - 1), sv(0)};
}

ConstrainedResolvent::ConstrainedResolvent(Paravector s, CliffordOperator T, BoundarySpec spec)
    : s_(std::move(s)), T_(std::move(T)), spec_(std::move(spec)),
      qinv_cache_(std::make_shared<QinvCache>()) {}

ConstrainedResolvent ConstrainedResolvent::assemble(const CliffordOperator& T, const Paravector& s,
                                                    const BoundarySpec& spec) {
    spec.validate();
    ConstrainedResolvent r(s, T, spec);
    r.M_ = assembled_matrix(T, s, spec);
    const auto [smin, smax] = singular_extent(r.M_);
    r.sigma_min_ = smin;
    r.sigma_max_ = smax;

    const int d = 1 << T.n();
    r.pi_ = Eigen::VectorXd::Ones(r.M_.rows());
    for (int k : spec.replace_rows)
        r.pi_.segment(static_cast<Eigen::Index>(k) * d, d).setZero();

    if (smin <= 1e-10 * smax) {
        std::ostringstream msg;
        msg << "s in the S-spectrum with boundary conditions: sigma_min " << smin
            << " <= 1e-10 * sigma_max " << smax;
        throw SingularSystem(msg.str(), smin, smax);
    }
    r.lu_.compute(r.M_);
    return r;
}

const Eigen::MatrixXd& ConstrainedResolvent::qinv_matrix() const {
    std::call_once(qinv_cache_->once, [this] {
        Eigen::MatrixXd masked = Eigen::MatrixXd::Zero(M_.rows(), M_.cols());
        masked.diagonal() = pi_;
        qinv_cache_->qi = lu_.solve(masked);
    });
    return qinv_cache_->qi;
}

CliffordVector commutator(const ConstrainedResolvent& R, const CliffordVector& v) {
    return apply(R.op(), R.solve(v)) - R.solve(apply(R.op(), v));
}

Eigen::MatrixXd commutator_matrix(const ConstrainedResolvent& R) {
    const Eigen::MatrixXd& rt = R.op_matrix();
    const Eigen::MatrixXd& qi = R.qinv_matrix();
    return rt * qi - qi * rt;
}

Subspace commutator_kernel(const ConstrainedResolvent& R, double rel_tol) {
    const Eigen::MatrixXd& rt = R.op_matrix();
    const Eigen::MatrixXd& qi = R.qinv_matrix();
    const Eigen::MatrixXd tq = rt * qi;
    const Eigen::MatrixXd qt = qi * rt;
    const Eigen::MatrixXd k = tq - qt;
    // a commutator below rounding level of its two terms is the zero map
    const double scale = singular_extent(tq).second + singular_extent(qt).second;
    if (singular_extent(k).second <= 1e-10 * scale)
        return Subspace{Eigen::MatrixXd::Identity(k.rows(), k.cols()), rel_tol};
    return nullspace(k, rel_tol);
}

Subspace image_characterization(const ConstrainedResolvent& R, double rel_tol) {
    const Eigen::Index N = R.size();
    if (R.spec().algebraic()) return Subspace{Eigen::MatrixXd::Identity(N, N), rel_tol};
    const Eigen::MatrixXd crep = R.spec().real_rep();
    Eigen::MatrixXd stacked(2 * crep.rows(), N);
    stacked.topRows(crep.rows()) = crep;
    stacked.bottomRows(crep.rows()) = crep * R.op_matrix();
    const Subspace good = nullspace(stacked, rel_tol);
    const Eigen::MatrixXd qrep = build_Q(R.op(), R.s()).real_rep();
    return orthonormalize(qrep * good.basis, rel_tol);
}

} // namespace cliffspec
