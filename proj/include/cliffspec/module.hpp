#pragma once

// Finite-dimensional Clifford module V = (R_n)^m and the right-linear
// operators on it, stored as m x m arrays of Clifford entries acting by
// left multiplication. The regular real representation (size 2^n * m) is
// the single source of truth for all numerics; the Clifford form is kept
// for algebraic clarity.

#include <Eigen/Dense>
#include <memory>
#include <mutex>
#include <vector>

#include "cliffspec/clifford.hpp"

namespace cliffspec {

/// Real matrix of left multiplication v -> s v on R_n, 2^n x 2^n.
/// Column B holds the coefficients of s * e_B.
inline Eigen::MatrixXd lmul_matrix(const Multivector& s) {
    const int d = s.dim();
    Eigen::MatrixXd rep = Eigen::MatrixXd::Zero(d, d);
    for (Mask b = 0; b < static_cast<Mask>(d); ++b)
        for (Mask a = 0; a < static_cast<Mask>(d); ++a) {
            const double c = s[a];
            if (c != 0.0) rep(a ^ b, b) += blade_sign(a, b) * c;
        }
    return rep;
}

/// Real matrix of right multiplication v -> v s on R_n.
inline Eigen::MatrixXd rmul_matrix(const Multivector& s) {
    const int d = s.dim();
    Eigen::MatrixXd rep = Eigen::MatrixXd::Zero(d, d);
    for (Mask b = 0; b < static_cast<Mask>(d); ++b)
        for (Mask a = 0; a < static_cast<Mask>(d); ++a) {
            const double c = s[a];
            if (c != 0.0) rep(b ^ a, b) += blade_sign(b, a) * c;
        }
    return rep;
}

/// Element of V = (R_n)^m.
class CliffordVector {
public:
    CliffordVector(int n, int m) : n_(n), m_(m), e_(static_cast<std::size_t>(m), Multivector(n)) {}
    CliffordVector(int n, std::vector<Multivector> entries)
        : n_(n), m_(static_cast<int>(entries.size())), e_(std::move(entries)) {
        for (const auto& x : e_)
            if (x.n() != n_) throw DimensionMismatch("CliffordVector: mixed algebra entries");
    }

    int n() const { return n_; }
    int m() const { return m_; }
    const Multivector& operator[](int i) const { return e_[static_cast<std::size_t>(i)]; }
    Multivector& operator[](int i) { return e_[static_cast<std::size_t>(i)]; }

    double squared_norm() const {
        double acc = 0;
        for (const auto& x : e_) acc += modulus_sq(x);
        return acc;
    }
    double norm() const { return std::sqrt(squared_norm()); }

    friend CliffordVector operator+(CliffordVector a, const CliffordVector& b) {
        a.same_module(b);
        for (int i = 0; i < a.m_; ++i) a[i] += b[i];
        return a;
    }
    friend CliffordVector operator-(CliffordVector a, const CliffordVector& b) {
        a.same_module(b);
        for (int i = 0; i < a.m_; ++i) a[i] -= b[i];
        return a;
    }
    friend CliffordVector operator*(CliffordVector a, double v) {
        for (int i = 0; i < a.m_; ++i) a[i] *= v;
        return a;
    }

    void same_module(const CliffordVector& o) const {
        if (n_ != o.n_ || m_ != o.m_) throw DimensionMismatch("CliffordVector: module mismatch");
    }

private:
    int n_, m_;
    std::vector<Multivector> e_;
};

/// Entrywise right scalar multiplication (v s)_i = v_i s.
inline CliffordVector right_scalar_mul(const CliffordVector& v, const Multivector& s) {
    if (v.n() != s.n()) throw DimensionMismatch("right_scalar_mul: algebra mismatch");
    CliffordVector out(v.n(), v.m());
    for (int i = 0; i < v.m(); ++i) out[i] = v[i] * s;
    return out;
}

/// Entrywise left scalar multiplication (s v)_i = s v_i.
inline CliffordVector left_scalar_mul(const Multivector& s, const CliffordVector& v) {
    if (v.n() != s.n()) throw DimensionMismatch("left_scalar_mul: algebra mismatch");
    CliffordVector out(v.n(), v.m());
    for (int i = 0; i < v.m(); ++i) out[i] = s * v[i];
    return out;
}

inline CliffordVector operator*(const CliffordVector& v, const Multivector& s) {
    return right_scalar_mul(v, s);
}
inline CliffordVector operator*(const Multivector& s, const CliffordVector& v) {
    return left_scalar_mul(s, v);
}

/// Flattened real coordinates, node-major: entry i occupies the slots
/// [i*2^n, (i+1)*2^n).
inline Eigen::VectorXd flatten(const CliffordVector& v) {
    const int d = 1 << v.n();
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.m()) * d);
    for (int i = 0; i < v.m(); ++i)
        for (int c = 0; c < d; ++c) out(static_cast<Eigen::Index>(i) * d + c) = v[i][static_cast<Mask>(c)];
    return out;
}

inline CliffordVector unflatten(int n, int m, const Eigen::VectorXd& x) {
    const int d = 1 << n;
    if (x.size() != static_cast<Eigen::Index>(m) * d)
        throw DimensionMismatch("unflatten: wrong coordinate count");
    CliffordVector v(n, m);
    for (int i = 0; i < m; ++i)
        for (int c = 0; c < d; ++c) v[i][static_cast<Mask>(c)] = x(static_cast<Eigen::Index>(i) * d + c);
    return v;
}

/// Square real matrix of the regular representation.
using RealRep = Eigen::MatrixXd;

/// Right-linear operator on V: (T v)_i = sum_j T_ij v_j with entries
/// acting by left multiplication. Immutable after construction; the real
/// representation is memoized and shared across copies (single writer,
/// concurrent readers).
class CliffordOperator {
public:
    CliffordOperator(int n, int m, std::vector<Multivector> entries)
        : n_(n), m_(m), e_(std::move(entries)), cache_(std::make_shared<Cache>()) {
        if (static_cast<int>(e_.size()) != m * m)
            throw DimensionMismatch("CliffordOperator: needs m*m entries");
        for (const auto& x : e_)
            if (x.n() != n_) throw DimensionMismatch("CliffordOperator: mixed algebra entries");
    }

    static CliffordOperator zero(int n, int m) {
        return CliffordOperator(n, m, std::vector<Multivector>(static_cast<std::size_t>(m) * m, Multivector(n)));
    }
    static CliffordOperator identity(int n, int m) {
        auto ents = std::vector<Multivector>(static_cast<std::size_t>(m) * m, Multivector(n));
        for (int i = 0; i < m; ++i) ents[static_cast<std::size_t>(i) * m + i] = Multivector::scalar(n, 1.0);
        return CliffordOperator(n, m, std::move(ents));
    }

    int n() const { return n_; }
    int m() const { return m_; }
    const Multivector& entry(int i, int j) const { return e_[static_cast<std::size_t>(i) * m_ + j]; }

    /// Block matrix of left-multiplication blocks; multiplicative and
    /// unital. Memoized.
    const RealRep& real_rep() const {
        std::call_once(cache_->once, [this] {
            const int d = 1 << n_;
            cache_->rep = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m_) * d,
                                                static_cast<Eigen::Index>(m_) * d);
            for (int i = 0; i < m_; ++i)
                for (int j = 0; j < m_; ++j)
                    cache_->rep.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(j) * d, d, d) =
                        lmul_matrix(entry(i, j));
        });
        return cache_->rep;
    }

    friend CliffordOperator operator+(const CliffordOperator& a, const CliffordOperator& b) {
        a.same_shape(b);
        std::vector<Multivector> ents;
        ents.reserve(a.e_.size());
        for (std::size_t k = 0; k < a.e_.size(); ++k) ents.push_back(a.e_[k] + b.e_[k]);
        return CliffordOperator(a.n_, a.m_, std::move(ents));
    }
    friend CliffordOperator operator-(const CliffordOperator& a, const CliffordOperator& b) {
        a.same_shape(b);
        std::vector<Multivector> ents;
        ents.reserve(a.e_.size());
        for (std::size_t k = 0; k < a.e_.size(); ++k) ents.push_back(a.e_[k] - b.e_[k]);
        return CliffordOperator(a.n_, a.m_, std::move(ents));
    }
    friend CliffordOperator operator*(const CliffordOperator& a, double v) {
        std::vector<Multivector> ents;
        ents.reserve(a.e_.size());
        for (const auto& x : a.e_) ents.push_back(x * v);
        return CliffordOperator(a.n_, a.m_, std::move(ents));
    }
    friend CliffordOperator operator*(double v, const CliffordOperator& a) { return a * v; }

    void same_shape(const CliffordOperator& o) const {
        if (n_ != o.n_ || m_ != o.m_) throw DimensionMismatch("CliffordOperator: shape mismatch");
    }

private:
    struct Cache {
        std::once_flag once;
        Eigen::MatrixXd rep;
    };

    int n_, m_;
    std::vector<Multivector> e_;
    std::shared_ptr<Cache> cache_;
};

inline CliffordVector apply(const CliffordOperator& T, const CliffordVector& v) {
    if (T.n() != v.n() || T.m() != v.m()) throw DimensionMismatch("apply: module mismatch");
    CliffordVector out(T.n(), T.m());
    for (int i = 0; i < T.m(); ++i) {
        Multivector acc(T.n());
        for (int j = 0; j < T.m(); ++j) acc += T.entry(i, j) * v[j];
        out[i] = acc;
    }
    return out;
}

/// Operator composition (T compose S)_ij = sum_k T_ik S_kj.
inline CliffordOperator compose(const CliffordOperator& T, const CliffordOperator& S) {
    T.same_shape(S);
    const int m = T.m();
    std::vector<Multivector> ents(static_cast<std::size_t>(m) * m, Multivector(T.n()));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            Multivector acc(T.n());
            for (int k = 0; k < m; ++k) acc += T.entry(i, k) * S.entry(k, j);
            ents[static_cast<std::size_t>(i) * m + j] = acc;
        }
    return CliffordOperator(T.n(), m, std::move(ents));
}

inline RealRep real_rep(const CliffordOperator& T) { return T.real_rep(); }

/// The operator polynomial T^2 - 2 s_0 T + |s|^2 I. It sees s only
/// through (s_0, |s|^2), hence is constant on the sphere [s].
inline CliffordOperator build_Q(const CliffordOperator& T, const Paravector& s) {
    if (T.n() != s.n()) throw DimensionMismatch("build_Q: algebra mismatch");
    return compose(T, T) - 2.0 * s.real_part() * T + modulus_sq(s) * CliffordOperator::identity(T.n(), T.m());
}

/// Diagonal operator of entrywise left multiplication by a paravector.
inline CliffordOperator mult_operator(const Paravector& p, int m) {
    if (m < 1) throw DimensionMismatch("mult_operator: m must be >= 1");
    std::vector<Multivector> ents(static_cast<std::size_t>(m) * m, Multivector(p.n()));
    for (int i = 0; i < m; ++i) ents[static_cast<std::size_t>(i) * m + i] = p.to_multivector();
    return CliffordOperator(p.n(), m, std::move(ents));
}

/// Block-diagonal join of two operators over the same algebra.
inline CliffordOperator block_diag(const CliffordOperator& A, const CliffordOperator& B) {
    if (A.n() != B.n()) throw DimensionMismatch("block_diag: algebra mismatch");
    const int m = A.m() + B.m();
    std::vector<Multivector> ents(static_cast<std::size_t>(m) * m, Multivector(A.n()));
    for (int i = 0; i < A.m(); ++i)
        for (int j = 0; j < A.m(); ++j) ents[static_cast<std::size_t>(i) * m + j] = A.entry(i, j);
    for (int i = 0; i < B.m(); ++i)
        for (int j = 0; j < B.m(); ++j)
            ents[static_cast<std::size_t>(A.m() + i) * m + (A.m() + j)] = B.entry(i, j);
    return CliffordOperator(A.n(), m, std::move(ents));
}

/// N x N block-diagonal real matrix of entrywise left multiplication on V.
inline Eigen::MatrixXd left_mul_rep(const Multivector& s, int m) {
    const int d = s.dim();
    Eigen::MatrixXd block = lmul_matrix(s);
    Eigen::MatrixXd rep = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m) * d,
                                                static_cast<Eigen::Index>(m) * d);
    for (int i = 0; i < m; ++i)
        rep.block(static_cast<Eigen::Index>(i) * d, static_cast<Eigen::Index>(i) * d, d, d) = block;
    return rep;
}

} // namespace cliffspec
