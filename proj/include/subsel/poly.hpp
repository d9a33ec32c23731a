#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "subsel/dense.hpp"

namespace subsel::poly {

enum class Backend { Rational, Float };

template <class T>
inline constexpr Backend backend_of = is_rational_v<T> ? Backend::Rational : Backend::Float;

/// Binomial coefficient C(n, k) in the backend's arithmetic (0 when k > n).
template <class T>
T binomial(std::size_t n, std::size_t k) {
    if (k > n) return T(0);
    if constexpr (is_rational_v<T>) {
        mpz_class out;
        mpz_bin_uiui(out.get_mpz_t(), n, k);
        return Rational(out);
    } else {
        k = std::min(k, n - k);
        double out = 1.0;
        for (std::size_t i = 1; i <= k; ++i)
            out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
        return out;
    }
}

/// Univariate polynomial with ascending dense coefficients. Trailing exact
/// zeros are trimmed, so the leading coefficient is nonzero unless the
/// polynomial is zero.
template <class T>
class Poly {
public:
    static constexpr Backend backend = backend_of<T>;

    Poly() = default;
    explicit Poly(std::vector<T> ascending) : c_(std::move(ascending)) { trim(); }

    static Poly constant(T v) { return Poly(std::vector<T>{std::move(v)}); }
    static Poly x() { return Poly(std::vector<T>{T(0), T(1)}); }
    /// x - root
    static Poly linear(const T& root) { return Poly(std::vector<T>{T(-root), T(1)}); }
    static Poly x_power(std::size_t e) {
        std::vector<T> c(e + 1, T(0));
        c[e] = T(1);
        return Poly(std::move(c));
    }
    /// (x - 1)^e expanded by the binomial theorem.
    static Poly x_minus_one_power(std::size_t e) {
        std::vector<T> c(e + 1);
        for (std::size_t i = 0; i <= e; ++i) {
            T b = binomial<T>(e, i);
            c[i] = ((e - i) % 2 == 0) ? b : T(-b);
        }
        return Poly(std::move(c));
    }
    static Poly from_roots(const std::vector<T>& roots) {
        Poly out = constant(T(1));
        for (const T& r : roots) out = out * linear(r);
        return out;
    }

    bool is_zero() const { return c_.empty(); }
    /// Degree; 0 for constants and for the zero polynomial.
    std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
    const std::vector<T>& coeffs() const { return c_; }
    T coeff(std::size_t i) const { return i < c_.size() ? c_[i] : T(0); }
    T leading() const { return c_.empty() ? T(0) : c_.back(); }

    T operator()(const T& x) const {
        T acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    double max_abs_coeff() const {
        double out = 0.0;
        for (const T& v : c_) out = std::max(out, magnitude(v));
        return out;
    }

    Poly scaled(const T& s) const {
        auto c = c_;
        for (auto& v : c) v *= s;
        return Poly(std::move(c));
    }

    Poly monic() const {
        if (is_zero()) throw NumericError("monic: zero polynomial");
        const T lead = leading();
        auto c = c_;
        for (auto& v : c) v /= lead;
        c.back() = T(1);
        return Poly(std::move(c));
    }

    /// k-fold formal derivative.
    Poly derivative(std::size_t k = 1) const {
        if (k > degree() || is_zero()) return Poly();
        std::vector<T> c(c_.size() - k);
        for (std::size_t i = k; i < c_.size(); ++i) {
            T factor(1);
            for (std::size_t r = 0; r < k; ++r) factor *= T(static_cast<long>(i - r));
            c[i - k] = c_[i] * factor;
        }
        return Poly(std::move(c));
    }

    /// p(x) * x^e
    Poly shifted(std::size_t e) const {
        if (is_zero()) return Poly();
        std::vector<T> c(e, T(0));
        c.insert(c.end(), c_.begin(), c_.end());
        return Poly(std::move(c));
    }

    /// p(1 - x), exact binomial recombination.
    Poly reflected() const {
        std::vector<T> c(c_.size(), T(0));
        for (std::size_t j = 0; j < c_.size(); ++j) {
            if (is_exact_zero(c_[j])) continue;
            for (std::size_t i = 0; i <= j; ++i) {
                T term = c_[j] * binomial<T>(j, i);
                if (i % 2 == 1) term = -term;
                c[i] += term;
            }
        }
        return Poly(std::move(c));
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<T> c(std::max(a.c_.size(), b.c_.size()), T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + b.scaled(T(-1)); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<T> c(a.c_.size() + b.c_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (is_exact_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(c));
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

private:
    void trim() {
        while (!c_.empty() && is_exact_zero(c_.back())) c_.pop_back();
    }
    std::vector<T> c_;
};

using RationalPoly = Poly<Rational>;
using FloatPoly = Poly<double>;

/// Exact rational coefficients rounded once to double.
FloatPoly to_float(const RationalPoly& p);

template <class T>
Poly<T> derivative_k(const Poly<T>& p, std::size_t k) {
    return p.derivative(k);
}

template <class T>
Poly<T> pow(const Poly<T>& p, std::size_t e) {
    Poly<T> out = Poly<T>::constant(T(1));
    for (std::size_t i = 0; i < e; ++i) out = out * p;
    return out;
}

enum class DeflationBase { X, XMinusOne };

inline constexpr double kFloatDeflationTolerance = 1e-9;

/// p / base^e. Exact divisibility is required for rationals; for floats the
/// discarded remainder must stay below 1e-9 * max|coeff|.
template <class T>
Poly<T> deflate_power(const Poly<T>& p, DeflationBase base, std::size_t e) {
    if (e == 0) return p;
    if (p.is_zero()) return p;
    if (e > p.degree())
        throw NumericError("deflate_power: base^" + std::to_string(e) + " exceeds degree " +
                           std::to_string(p.degree()));
    const double scale = p.max_abs_coeff();
    double residual = 0.0;
    std::vector<T> c = p.coeffs();
    if (base == DeflationBase::X) {
        for (std::size_t i = 0; i < e; ++i) {
            residual = std::max(residual, magnitude(c[i]));
            if constexpr (is_rational_v<T>) {
                if (!is_exact_zero(c[i]))
                    throw NumericError("deflate_power: not divisible by x^" + std::to_string(e) +
                                       ", residual " + std::to_string(residual));
            }
        }
        c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(e));
    } else {
        for (std::size_t round = 0; round < e; ++round) {
            // synthetic division by (x - 1)
            const std::size_t d = c.size() - 1;
            std::vector<T> q(d);
            q[d - 1] = c[d];
            for (std::size_t i = d - 1; i-- > 0;) q[i] = c[i + 1] + q[i + 1];
            T rem = c[0] + q[0];
            residual = std::max(residual, magnitude(rem));
            if constexpr (is_rational_v<T>) {
                if (!is_exact_zero(rem))
                    throw NumericError("deflate_power: not divisible by (x-1)^" + std::to_string(e) +
                                       ", residual " + std::to_string(residual));
            }
            c = std::move(q);
        }
    }
    if constexpr (!is_rational_v<T>) {
        if (residual > kFloatDeflationTolerance * std::max(scale, 1e-300))
            throw NumericError("deflate_power: not divisible, residual " + std::to_string(residual));
    }
    return Poly<T>(std::move(c));
}

/// Real roots of a (numerically) real-rooted polynomial, descending, with
/// multiplicity.
struct RootList {
    enum class Method { Exact, Companion, InterlacingBisection };

    std::vector<double> roots;
    /// Largest imaginary part discarded from the companion eigenvalues.
    double residual_imag = 0.0;
    Method method = Method::Companion;
};

inline constexpr double kRealRootTolerance = 1e-6;

/// Companion-matrix eigenvalues with balancing plus one Newton pass. When the
/// imaginary residue exceeds 1e-6 * (1 + max|root|), the roots are recomputed
/// by bisection between the critical points (roots of p'), which resolves
/// clustered multiple roots; a polynomial that fails that route as well is not
/// real-rooted and raises NumericError.
RootList real_roots(const FloatPoly& p);
RootList real_roots(const RationalPoly& p);

/// j-th largest root (1-based), counting multiplicity.
double kth_largest_root(const FloatPoly& p, std::size_t j);
double kth_largest_root(const RationalPoly& p, std::size_t j);

/// Smallest root.
double min_root(const FloatPoly& p);

/// det(x I - M). Rational: Faddeev-LeVerrier, exact. Float: symmetric
/// eigenvalues expanded from the roots.
RationalPoly charpoly_gram(const DenseMatrix<Rational>& m);
FloatPoly charpoly_gram(const DenseMatrix<double>& m);

/// Eigenvalues of a symmetric matrix, ascending.
std::vector<double> symmetric_eigenvalues(const DenseMatrix<double>& m);

/// c_0..c_k with p = sum c_i C(k,i) x^i (1-x)^(k-i).
template <class T>
std::vector<T> bernstein_coeffs(const Poly<T>& p, std::size_t k) {
    if (!p.is_zero() && p.degree() > k)
        throw InputError("bernstein_coeffs: degree " + std::to_string(p.degree()) + " exceeds " +
                         std::to_string(k));
    std::vector<T> c(k + 1, T(0));
    for (std::size_t i = 0; i <= k; ++i)
        for (std::size_t j = 0; j <= i && j <= p.degree(); ++j) {
            if (is_exact_zero(p.coeff(j))) continue;
            c[i] += p.coeff(j) * binomial<T>(i, j) / binomial<T>(k, j);
        }
    return c;
}

template <class T>
Poly<T> from_bernstein(const std::vector<T>& c) {
    if (c.empty()) return Poly<T>();
    const std::size_t k = c.size() - 1;
    std::vector<T> a(k + 1, T(0));
    for (std::size_t i = 0; i <= k; ++i) {
        if (is_exact_zero(c[i])) continue;
        const T base = c[i] * binomial<T>(k, i);
        for (std::size_t j = i; j <= k; ++j) {
            T term = base * binomial<T>(k - i, j - i);
            if ((j - i) % 2 == 1) term = -term;
            a[j] += term;
        }
    }
    return Poly<T>(std::move(a));
}

/// Polynomial stored in the degree-d Bernstein basis on [0, 1]. The degree is
/// formal (not trimmed). Products with factors whose roots lie in [0, 1] and
/// repeated differentiation stay well conditioned in this basis, which is why
/// the floating-point node polynomials are assembled here.
template <class T>
class BernsteinPoly {
public:
    BernsteinPoly() : b_{T(1)} {}
    explicit BernsteinPoly(std::vector<T> coeffs) : b_(std::move(coeffs)) {
        if (b_.empty()) throw InputError("BernsteinPoly: empty coefficient list");
    }
    static BernsteinPoly from_monomial(const Poly<T>& p, std::size_t degree) {
        return BernsteinPoly(bernstein_coeffs(p, degree));
    }

    std::size_t degree() const { return b_.size() - 1; }
    const std::vector<T>& coeffs() const { return b_; }
    Poly<T> to_monomial() const { return from_bernstein(b_); }

    /// this * (x - root)
    BernsteinPoly times_linear(const T& root) const {
        const std::size_t d = degree();
        const T dp1 = T(static_cast<long>(d + 1));
        const T one_minus = T(1) - root;
        std::vector<T> c(d + 2, T(0));
        for (std::size_t j = 0; j <= d + 1; ++j) {
            if (j >= 1) c[j] += one_minus * b_[j - 1] * T(static_cast<long>(j)) / dp1;
            if (j <= d) c[j] -= root * b_[j] * T(static_cast<long>(d + 1 - j)) / dp1;
        }
        return BernsteinPoly(std::move(c));
    }

    /// this * x^s
    BernsteinPoly times_x_power(std::size_t s) const {
        const std::size_t d = degree();
        std::vector<T> c(d + s + 1, T(0));
        for (std::size_t i = 0; i <= d; ++i) {
            // x^s B_{d,i} = C(d,i)/C(d+s,i+s) B_{d+s,i+s}
            T ratio(1);
            for (std::size_t r = 1; r <= s; ++r)
                ratio = ratio * T(static_cast<long>(i + r)) / T(static_cast<long>(d + r));
            c[i + s] = b_[i] * ratio;
        }
        return BernsteinPoly(std::move(c));
    }

    /// this / x^s; the first s coefficients must vanish (exactly for
    /// rationals, to `relative_tolerance * max|b|` for floats).
    BernsteinPoly divided_by_x_power(std::size_t s, double relative_tolerance = 0.0) const {
        const std::size_t d = degree();
        if (s > d) throw NumericError("BernsteinPoly: cannot divide degree " + std::to_string(d) +
                                      " by x^" + std::to_string(s));
        double scale = 0.0;
        for (const T& v : b_) scale = std::max(scale, magnitude(v));
        for (std::size_t i = 0; i < s; ++i) {
            const bool ok = is_rational_v<T> ? is_exact_zero(b_[i])
                                             : magnitude(b_[i]) <= relative_tolerance * scale;
            if (!ok)
                throw NumericError("BernsteinPoly: not divisible by x^" + std::to_string(s) +
                                   " (coefficient " + std::to_string(i) + " = " +
                                   std::to_string(magnitude(b_[i])) + ")");
        }
        std::vector<T> c(d - s + 1);
        for (std::size_t i = 0; i + s <= d; ++i) {
            // C(d,i+s)/C(d-s,i) = prod_{r<s} (d-r)/(i+s-r)
            T ratio(1);
            for (std::size_t r = 0; r < s; ++r)
                ratio = ratio * T(static_cast<long>(d - r)) / T(static_cast<long>(i + s - r));
            c[i] = b_[i + s] * ratio;
        }
        return BernsteinPoly(std::move(c));
    }

    /// k-fold derivative.
    BernsteinPoly derivative(std::size_t k = 1) const {
        if (k > degree()) return BernsteinPoly(std::vector<T>{T(0)});
        std::vector<T> c = b_;
        for (std::size_t round = 0; round < k; ++round) {
            const std::size_t d = c.size() - 1;
            std::vector<T> next(d);
            for (std::size_t i = 0; i < d; ++i)
                next[i] = (c[i + 1] - c[i]) * T(static_cast<long>(d));
            c = std::move(next);
        }
        return BernsteinPoly(std::move(c));
    }

    /// p(1 - x): reversed coefficients.
    BernsteinPoly reflected() const {
        std::vector<T> c(b_.rbegin(), b_.rend());
        return BernsteinPoly(std::move(c));
    }

    /// Value by de Casteljau.
    T operator()(const T& x) const {
        std::vector<T> w = b_;
        const T one_minus = T(1) - x;
        for (std::size_t level = w.size(); level-- > 1;)
            for (std::size_t i = 0; i < level; ++i) w[i] = one_minus * w[i] + x * w[i + 1];
        return w[0];
    }

private:
    std::vector<T> b_;
};

} // namespace subsel::poly
