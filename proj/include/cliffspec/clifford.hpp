#pragma once

// Dense arithmetic of the real Clifford algebra over n anticommuting
// imaginary units (e_i^2 = -1, e_i e_j = -e_j e_i), together with the
// paravector geometry used by the spectral code: conjugation, modulus,
// slice coordinates x + Jy and the sphere of imaginary units.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cliffspec/errors.hpp"

namespace cliffspec {

/// Bitmask multi-index: bit (i-1) set means the unit e_i is present.
/// The empty mask is the scalar unit e_{} = 1.
using Mask = std::uint32_t;

inline constexpr int kMaxAlgebraDim = 6;

namespace detail {

/// Sign of the product e_A e_B: (-1)^t from sorting the concatenated
/// index word, times (-1)^{|A cap B|} from cancelling repeated units.
/// t counts, for each unit in B, the units of A strictly above it.
inline int blade_sign_direct(Mask a, Mask b) {
    int t = 0;
    for (Mask rest = b; rest != 0; rest &= rest - 1) {
        const Mask bit = rest & (~rest + 1u);
        const Mask above = ~((bit << 1u) - 1u);
        t += std::popcount(a & above);
    }
    t += std::popcount(a & b);
    return (t & 1) ? -1 : 1;
}

/// Signs are independent of n, so one 64x64 table covers n <= 6.
inline const std::array<std::int8_t, 64 * 64>& blade_sign_table() {
    static const std::array<std::int8_t, 64 * 64> table = [] {
        std::array<std::int8_t, 64 * 64> t{};
        for (Mask a = 0; a < 64; ++a)
            for (Mask b = 0; b < 64; ++b)
                t[a * 64 + b] = static_cast<std::int8_t>(blade_sign_direct(a, b));
        return t;
    }();
    return table;
}

} // namespace detail

inline int blade_sign(Mask a, Mask b) {
    return detail::blade_sign_table()[a * 64 + b];
}

/// Grade |A| of a basis blade.
inline int blade_grade(Mask a) { return std::popcount(a); }

/// Conjugation sign (-1)^{r(r+1)/2} for a blade of grade r.
inline int conjugation_sign(Mask a) {
    const int r = std::popcount(a);
    return ((r * (r + 1) / 2) % 2 == 0) ? 1 : -1;
}

/// Multi-index as a digit string ("" for the scalar unit, "12" for e_1e_2).
inline std::string mask_to_string(Mask a) {
    std::string s;
    for (int i = 1; i <= kMaxAlgebraDim; ++i)
        if (a & (1u << (i - 1))) s += static_cast<char>('0' + i);
    return s;
}

/// Element of the Clifford algebra with 2^n dense coefficients in blade
/// (bitmask) order: 1, e_1, e_2, e_1e_2, e_3, ...
template <typename Scalar>
class MultivectorT {
public:
    explicit MultivectorT(int n) : n_(n), c_(std::size_t{1} << check_dim(n), Scalar{0}) {}

    static MultivectorT scalar(int n, Scalar v) {
        MultivectorT m(n);
        m.c_[0] = v;
        return m;
    }
    static MultivectorT unit(int n, int i) { return blade(n, Mask{1} << (i - 1)); }
    static MultivectorT blade(int n, Mask a, Scalar v = Scalar{1}) {
        MultivectorT m(n);
        if (a >= m.c_.size())
            throw DimensionMismatch("blade index outside algebra of dimension " + std::to_string(n));
        m.c_[a] = v;
        return m;
    }

    int n() const { return n_; }
    int dim() const { return static_cast<int>(c_.size()); }

    Scalar operator[](Mask a) const { return c_[a]; }
    Scalar& operator[](Mask a) { return c_[a]; }

    const std::vector<Scalar>& coeffs() const { return c_; }

    MultivectorT& operator+=(const MultivectorT& o) {
        same_algebra(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    MultivectorT& operator-=(const MultivectorT& o) {
        same_algebra(o);
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    MultivectorT& operator*=(Scalar v) {
        for (auto& x : c_) x *= v;
        return *this;
    }

    friend MultivectorT operator+(MultivectorT a, const MultivectorT& b) { return a += b; }
    friend MultivectorT operator-(MultivectorT a, const MultivectorT& b) { return a -= b; }
    friend MultivectorT operator*(MultivectorT a, Scalar v) { return a *= v; }
    friend MultivectorT operator*(Scalar v, MultivectorT a) { return a *= v; }
    friend MultivectorT operator-(MultivectorT a) { return a *= Scalar{-1}; }

    /// Clifford product, bilinear with the table sign per blade pair.
    friend MultivectorT operator*(const MultivectorT& a, const MultivectorT& b) {
        a.same_algebra(b);
        MultivectorT out(a.n_);
        const Mask d = static_cast<Mask>(a.c_.size());
        for (Mask i = 0; i < d; ++i) {
            const Scalar ai = a.c_[i];
            if (ai == Scalar{0}) continue;
            for (Mask j = 0; j < d; ++j) {
                const Scalar bj = b.c_[j];
                if (bj == Scalar{0}) continue;
                out.c_[i ^ j] += static_cast<Scalar>(blade_sign(i, j)) * ai * bj;
            }
        }
        return out;
    }

    bool operator==(const MultivectorT& o) const { return n_ == o.n_ && c_ == o.c_; }

    void same_algebra(const MultivectorT& o) const {
        if (n_ != o.n_)
            throw DimensionMismatch("algebra mismatch: R_" + std::to_string(n_) + " vs R_" +
                                    std::to_string(o.n_));
    }

private:
    static int check_dim(int n) {
        if (n < 1 || n > kMaxAlgebraDim)
            throw DimensionMismatch("algebra dimension n must be in [1, 6], got " + std::to_string(n));
        return n;
    }

    int n_;
    std::vector<Scalar> c_;
};

using Multivector = MultivectorT<double>;

template <typename Scalar>
MultivectorT<Scalar> clifford_mul(const MultivectorT<Scalar>& a, const MultivectorT<Scalar>& b) {
    return a * b;
}

/// Coefficient of each blade flips by (-1)^{|A|(|A|+1)/2}; on paravectors
/// this negates exactly the imaginary part.
template <typename Scalar>
MultivectorT<Scalar> conjugate(const MultivectorT<Scalar>& s) {
    MultivectorT<Scalar> out(s.n());
    for (Mask a = 0; a < static_cast<Mask>(s.dim()); ++a)
        out[a] = static_cast<Scalar>(conjugation_sign(a)) * s[a];
    return out;
}

template <typename Scalar>
Scalar modulus_sq(const MultivectorT<Scalar>& s) {
    Scalar acc{0};
    for (Mask a = 0; a < static_cast<Mask>(s.dim()); ++a) acc += s[a] * s[a];
    return acc;
}

inline double modulus(const Multivector& s) { return std::sqrt(modulus_sq(s)); }

/// Paravector s_0 + s_1 e_1 + ... + s_n e_n, identified with a point of
/// R^{n+1}.
class Paravector {
public:
    explicit Paravector(int n) : comp_(static_cast<std::size_t>(check(n)) + 1, 0.0) {}
    Paravector(int n, std::vector<double> components) : comp_(std::move(components)) {
        check(n);
        if (static_cast<int>(comp_.size()) != n + 1)
            throw DimensionMismatch("paravector needs n+1 components");
    }

    static Paravector real(int n, double x) {
        Paravector p(n);
        p.comp_[0] = x;
        return p;
    }
    static Paravector unit(int n, int i) {
        Paravector p(n);
        p.comp_[static_cast<std::size_t>(i)] = 1.0;
        return p;
    }

    int n() const { return static_cast<int>(comp_.size()) - 1; }
    double operator[](int i) const { return comp_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return comp_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& components() const { return comp_; }

    double real_part() const { return comp_[0]; }
    double imag_norm_sq() const {
        double acc = 0;
        for (std::size_t i = 1; i < comp_.size(); ++i) acc += comp_[i] * comp_[i];
        return acc;
    }
    double imag_norm() const { return std::sqrt(imag_norm_sq()); }

    Multivector to_multivector() const {
        Multivector m(n());
        m[0] = comp_[0];
        for (int i = 1; i <= n(); ++i) m[Mask{1} << (i - 1)] = comp_[static_cast<std::size_t>(i)];
        return m;
    }

    Paravector conj() const {
        Paravector p = *this;
        for (std::size_t i = 1; i < p.comp_.size(); ++i) p.comp_[i] = -p.comp_[i];
        return p;
    }

    friend Paravector operator+(Paravector a, const Paravector& b) {
        if (a.n() != b.n()) throw DimensionMismatch("paravector dimension mismatch");
        for (std::size_t i = 0; i < a.comp_.size(); ++i) a.comp_[i] += b.comp_[i];
        return a;
    }
    friend Paravector operator-(Paravector a, const Paravector& b) {
        if (a.n() != b.n()) throw DimensionMismatch("paravector dimension mismatch");
        for (std::size_t i = 0; i < a.comp_.size(); ++i) a.comp_[i] -= b.comp_[i];
        return a;
    }
    friend Paravector operator*(Paravector a, double v) {
        for (auto& x : a.comp_) x *= v;
        return a;
    }
    friend Paravector operator*(double v, Paravector a) { return a * v; }

private:
    static int check(int n) {
        if (n < 1 || n > kMaxAlgebraDim)
            throw DimensionMismatch("paravector dimension n must be in [1, 6]");
        return n;
    }
    std::vector<double> comp_;
};

inline double modulus_sq(const Paravector& s) {
    double acc = 0;
    for (int i = 0; i <= s.n(); ++i) acc += s[i] * s[i];
    return acc;
}

inline double modulus(const Paravector& s) { return std::sqrt(modulus_sq(s)); }

/// Slice coordinates of a paravector: s = x + J y with x real, y >= 0
/// and J an imaginary unit (J_0 = 0, |J| = 1, J^2 = -1).
struct SliceCoords {
    double x;
    double y;
    Paravector j;
};

/// For real paravectors (y = 0) the slice axis is undetermined; the
/// canonical choice is J = e_1.
inline SliceCoords slice_decompose(const Paravector& s) {
    const double y = s.imag_norm();
    if (y == 0.0) return {s.real_part(), 0.0, Paravector::unit(s.n(), 1)};
    Paravector j(s.n());
    for (int i = 1; i <= s.n(); ++i) j[i] = s[i] / y;
    return {s.real_part(), y, j};
}

inline Paravector slice_compose(int n, double x, double y, const Paravector& j) {
    Paravector s(n);
    s[0] = x;
    for (int i = 1; i <= n; ++i) s[i] = j[i] * y;
    return s;
}

/// Deterministic sample of unit imaginary paravectors. For n = 1 the
/// sphere is {±e_1}; the positive representative is returned.
inline std::vector<Paravector> sample_sphere(int n, std::uint64_t seed, int count) {
    if (count < 1) throw DimensionMismatch("sample_sphere: count must be >= 1");
    std::vector<Paravector> out;
    out.reserve(static_cast<std::size_t>(count));
    if (n == 1) {
        out.assign(static_cast<std::size_t>(count), Paravector::unit(1, 1));
        return out;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (static_cast<int>(out.size()) < count) {
        Paravector j(n);
        double norm_sq = 0;
        for (int i = 1; i <= n; ++i) {
            j[i] = gauss(rng);
            norm_sq += j[i] * j[i];
        }
        if (norm_sq < 1e-12) continue;
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (int i = 1; i <= n; ++i) j[i] *= inv;
        out.push_back(j);
    }
    return out;
}

/// Pseudo-metric controlling the pseudo-resolvent perturbation: constant
/// on spheres [s] because it sees only s_0 and |s|^2.
inline double ds_metric(const Paravector& s, const Paravector& q) {
    if (s.n() != q.n()) throw DimensionMismatch("ds_metric: dimension mismatch");
    return std::max(2.0 * std::abs(s.real_part() - q.real_part()),
                    std::abs(modulus_sq(s) - modulus_sq(q)));
}

/// True when q lies on the sphere [s] (same real part, same imaginary
/// modulus) within a relative tolerance.
inline bool same_sphere(const Paravector& s, const Paravector& q, double rel_tol = 1e-12) {
    const double scale = std::max({1.0, modulus(s), modulus(q)});
    return std::abs(s.real_part() - q.real_part()) <= rel_tol * scale &&
           std::abs(s.imag_norm() - q.imag_norm()) <= rel_tol * scale;
}

} // namespace cliffspec
