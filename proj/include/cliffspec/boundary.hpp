#pragma once

// Boundary conditions as a right submodule B = ker C with left-Clifford
// constraint coefficients, and the constrained pseudo-resolvent solver:
// the equation rows of Q_s[T] at the replaced node indices are overwritten
// by the constraint rows, so a solve enforces the interior equations and
// the constraints simultaneously. The interior projector Pi zeroes the
// replaced node slots; identities are always compared after Pi.

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <vector>

#include "cliffspec/module.hpp"

namespace cliffspec {

/// Constraint map C (b x m Clifford entries, left coefficients) plus the
/// node indices whose equation rows it replaces. Left coefficients are the
/// class closed under right scalar multiplication, so B = ker C is a
/// genuine right submodule; the type admits nothing else.
struct BoundarySpec {
    int n = 1;
    int m = 1;
    std::vector<Multivector> rows;   // b*m entries, row-major
    std::vector<int> replace_rows;   // size b, distinct, in [0, m)

    static BoundarySpec none(int n, int m) { return BoundarySpec{n, m, {}, {}}; }

    int b() const { return static_cast<int>(replace_rows.size()); }
    bool algebraic() const { return replace_rows.empty(); }

    const Multivector& entry(int k, int j) const { return rows[static_cast<std::size_t>(k) * m + j]; }

    /// Constraint values C v, one Clifford entry per constraint.
    CliffordVector apply(const CliffordVector& v) const;

    /// Real representation, (b*2^n) x (m*2^n).
    Eigen::MatrixXd real_rep() const;

    /// Checks index sanity and full row rank of the real representation.
    void validate() const;
};

/// Real subspace given by an orthonormal basis (columns).
struct Subspace {
    Eigen::MatrixXd basis;
    double tol = 1e-8;

    int dim() const { return static_cast<int>(basis.cols()); }
    int ambient() const { return static_cast<int>(basis.rows()); }
};

/// SVD nullspace with threshold rel_tol * sigma_max.
Subspace nullspace(const Eigen::MatrixXd& A, double rel_tol = 1e-8);

/// Largest principal angle between two subspaces, sin-based so small
/// angles keep full precision.
double max_principal_angle(const Subspace& a, const Subspace& b);

/// Orthonormalize the columns of a matrix (rank-revealing).
Subspace orthonormalize(const Eigen::MatrixXd& span, double rel_tol = 1e-8);

/// Factorized solver for the constrained pseudo-resolvent at one point s.
/// Immutable after assembly; concurrent solves are safe.
class ConstrainedResolvent {
public:
    /// Builds and factorizes the row-replaced system. Throws
    /// SingularSystem when sigma_min <= 1e-10 * sigma_max, i.e. s lies in
    /// the S-spectrum with boundary conditions.
    static ConstrainedResolvent assemble(const CliffordOperator& T, const Paravector& s,
                                         const BoundarySpec& spec);

    const Paravector& s() const { return s_; }
    const CliffordOperator& op() const { return T_; }
    const BoundarySpec& spec() const { return spec_; }
    int n() const { return T_.n(); }
    int m() const { return T_.m(); }
    int size() const { return static_cast<int>(M_.rows()); }

    double sigma_min() const { return sigma_min_; }
    double sigma_max() const { return sigma_max_; }

    const Eigen::MatrixXd& system_matrix() const { return M_; }
    const Eigen::MatrixXd& op_matrix() const { return T_.real_rep(); }

    /// Interior projector as a 0/1 diagonal.
    const Eigen::VectorXd& pi_diagonal() const { return pi_; }
    Eigen::VectorXd project_interior(const Eigen::VectorXd& f) const { return pi_.cwiseProduct(f); }
    CliffordVector project_interior(const CliffordVector& f) const {
        return unflatten(n(), m(), project_interior(flatten(f)));
    }

    /// u = M^{-1} (Pi f): interior rows of Q_s[T] u match f, constraints
    /// C u = 0 hold.
    Eigen::VectorXd solve(const Eigen::VectorXd& f) const { return lu_.solve(project_interior(f)); }
    CliffordVector solve(const CliffordVector& f) const {
        return unflatten(n(), m(), solve(flatten(f)));
    }
    Eigen::MatrixXd solve_matrix(const Eigen::MatrixXd& F) const {
        return lu_.solve(pi_.asDiagonal() * F);
    }

    /// Dense M^{-1} Pi, the matrix of the constrained pseudo-resolvent.
    const Eigen::MatrixXd& qinv_matrix() const;

private:
    ConstrainedResolvent(Paravector s, CliffordOperator T, BoundarySpec spec);

    struct QinvCache {
        std::once_flag once;
        Eigen::MatrixXd qi;
    };

    Paravector s_;
    CliffordOperator T_;
    BoundarySpec spec_;
    Eigen::MatrixXd M_;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::VectorXd pi_;
    double sigma_min_ = 0;
    double sigma_max_ = 0;
    mutable std::shared_ptr<QinvCache> qinv_cache_;
};

/// Row-replaced system matrix without factorization (for spectrum scans).
Eigen::MatrixXd assembled_matrix(const CliffordOperator& T, const Paravector& s,
                                 const BoundarySpec& spec);

/// Smallest/largest singular value of a dense matrix.
std::pair<double, double> singular_extent(const Eigen::MatrixXd& M);

/// q_inv as a free function, mirroring the operator notation.
inline CliffordVector q_inv(const ConstrainedResolvent& R, const CliffordVector& f) {
    return R.solve(f);
}

/// [T, Q_{s,B}[T]^{-1}] v = T(q_inv v) - q_inv(T v). Identically zero in
/// algebraic mode; with nontrivial boundary conditions it need not vanish.
CliffordVector commutator(const ConstrainedResolvent& R, const CliffordVector& v);

/// Dense matrix of v -> commutator(R, v).
Eigen::MatrixXd commutator_matrix(const ConstrainedResolvent& R);

/// Numerical nullspace of the commutator matrix.
Subspace commutator_kernel(const ConstrainedResolvent& R, double rel_tol = 1e-8);

/// The subspace {Q_s[T] v : C v = 0 and C(T v) = 0}, orthonormalized.
/// By the commutation characterization it coincides with the commutator
/// kernel whenever no nonzero commutator output is supported purely on
/// replaced node slots.
Subspace image_characterization(const ConstrainedResolvent& R, double rel_tol = 1e-8);

} // namespace cliffspec
