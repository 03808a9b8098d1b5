#pragma once

// The left and right S-resolvent operators with boundary conditions,
// their slice decomposition and closed-form derivatives, the Neumann
// series around a resolvent point, and residual evaluation of the
// Cauchy-Riemann conditions and the three S-resolvent equations.
//
// Operator-scalar convention, used everywhere: a scalar written to the
// right of an operator ("A sbar") pre-composes the operator with left
// multiplication by that scalar, A(sbar * v). Under this convention every
// algebraic cancellation in the identities below (e.g. sbar * s = |s|^2
// inside Q^{-1} sbar s) is reproduced verbatim by the implementation.
// A scalar on the left of an operator is plain left multiplication of
// the output. Pi precedes every q_inv application (by construction of
// solve) and all residuals are compared interior-projected.

#include <string>
#include <vector>

#include "cliffspec/boundary.hpp"

namespace cliffspec {

/// Spectral norm (largest singular value).
double spectral_norm(const Eigen::MatrixXd& A);

/// NxN block-diagonal left multiplication by a fixed Clifford number.
inline Eigen::MatrixXd left_mul_rep(const ConstrainedResolvent& R, const Multivector& s) {
    return left_mul_rep(s, R.m());
}

/// S_L^{-1}(s,T) v = q_inv(sbar v) - T q_inv(v).
CliffordVector s_left(const ConstrainedResolvent& R, const CliffordVector& v);

/// S_R^{-1}(s,T) v = sbar q_inv(v) - T q_inv(v).
CliffordVector s_right(const ConstrainedResolvent& R, const CliffordVector& v);

Eigen::MatrixXd s_left_matrix(const ConstrainedResolvent& R);
Eigen::MatrixXd s_right_matrix(const ConstrainedResolvent& R);

/// Slice form of the S-resolvents at s = x + Jy: both equal
/// f0 + f1 J (right slice) resp. f0 + J f1 (left slice) with real-
/// coefficient maps f0 = -T Q^{-1} + x Q^{-1} and f1 = -y Q^{-1}.
struct SliceDecomposition {
    double x;
    double y;
    Eigen::MatrixXd f0;
    Eigen::MatrixXd f1;
};

SliceDecomposition slice_parts(const ConstrainedResolvent& R);

/// Closed-form partial derivatives of Q^{-1} and T Q^{-1} along the slice
/// coordinates, with the interior projector inserted before every solve.
Eigen::MatrixXd dq_dx(const ConstrainedResolvent& R);
Eigen::MatrixXd dq_dy(const ConstrainedResolvent& R);
Eigen::MatrixXd dtq_dx(const ConstrainedResolvent& R);
Eigen::MatrixXd dtq_dy(const ConstrainedResolvent& R);

/// Radius bound 1 / (|T Q^{-1}| + |Q^{-1}|) for the Neumann series
/// neighborhood C_eps(q) in the d_S pseudo-metric.
double eps_star(const ConstrainedResolvent& Rq);

struct NeighborhoodCe {
    Paravector center;
    double radius;
};

/// d_S-ball around the expansion center; fraction must stay below 1 so
/// the radius respects the bound above.
NeighborhoodCe neighborhood(const ConstrainedResolvent& Rq, double fraction = 0.5);

inline bool contains(const NeighborhoodCe& ce, const Paravector& s) {
    return ds_metric(s, ce.center) <= ce.radius;
}

struct NeumannResult {
    Eigen::MatrixXd sum;          // truncated series, approximates Q_{s,B}^{-1}
    double d_s = 0;               // d_S(s, q)
    double eps_star = 0;          // convergence radius bound at q
    double contraction = 0;       // d_s * (|TQ^{-1}| + |Q^{-1}|)
    bool diverged = false;        // term norms blew past 1e6 x first term
    int terms_used = 0;
    std::vector<double> term_norms;
    std::vector<double> errors;   // per-term |partial sum - reference|, when a reference is given
};

/// Truncated series sum_k Q_{q,B}^{-1} (Lambda(q,s) Q_{q,B}^{-1})^k with
/// Lambda(q,s) = 2(s_0 - q_0) T + (|q|^2 - |s|^2) I. Converges to the
/// direct solve at s whenever d_S(s,q) < eps_star. Divergence is reported,
/// not thrown. With a reference matrix (the direct solve at s), records
/// the spectral-norm error of every partial sum.
NeumannResult neumann_series(const ConstrainedResolvent& Rq, const Paravector& s, int terms,
                             const Eigen::MatrixXd* reference = nullptr);

/// Interior-projected residuals of the two Cauchy-Riemann conditions at a
/// test vector.
std::pair<CliffordVector, CliffordVector> cr_residuals(const ConstrainedResolvent& R,
                                                       const CliffordVector& v);

/// Dense matrices of the two CR residual maps (interior projected).
Eigen::MatrixXd cr1_matrix(const ConstrainedResolvent& R);
Eigen::MatrixXd cr2_matrix(const ConstrainedResolvent& R);

/// Equivalence of the CR conditions with the commutation condition:
/// for s not real, null(second CR / y) against null(commutator o q_inv),
/// with the first CR vanishing there; for s real, null(first CR) against
/// null((T - s) o commutator o q_inv).
struct CrEquivalenceReport {
    bool s_real = false;
    int dim_cr_null = 0;
    int dim_comm_null = 0;
    double max_angle = 0;            // largest principal angle between the two nullspaces
    double r1_max_on_null = 0;       // max |r1(u)| over unit basis vectors of the common nullspace
    bool comm_null_contains_cr = false;  // real case: superset direction (always true by construction)
};

CrEquivalenceReport cr_equivalence_check(const ConstrainedResolvent& R, double rel_tol = 1e-8);

struct ResidualReport {
    std::string identity;
    int vector_id = 0;
    double absolute = 0;
    double relative = 0;
    Paravector s;
    Paravector q;   // second point for the two-point equation; equals s otherwise
    std::string mode;  // "algebraic" | "boundary"
};

/// Left S-resolvent equation S_L s - T S_L = I, interior-projected.
ResidualReport residual_left_eq(const ConstrainedResolvent& R, const CliffordVector& w);

/// Right S-resolvent equation s S_R v - S_R T v = v + (sbar - T)[T,Q^{-1}] v.
ResidualReport residual_right_eq(const ConstrainedResolvent& R, const CliffordVector& v);

/// Two-point S-resolvent equation relating S_R at s and S_L at q; the
/// right factor (q^2 - 2 s_0 q + |s|^2)^{-1} is inverted in the slice
/// plane of q. Throws DegeneratePair when s lies on [q].
ResidualReport residual_resolvent_eq(const ConstrainedResolvent& Rs, const ConstrainedResolvent& Rq,
                                     const CliffordVector& v);

} // namespace cliffspec
