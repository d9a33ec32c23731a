#include "subsel/expected.hpp"

#include <cmath>
#include <string>

namespace subsel::expected {

using poly::BernsteinPoly;
using poly::DeflationBase;
using poly::Poly;
using poly::RationalPoly;

namespace {

Rational falling_factorial(std::size_t top, std::size_t count) {
    mpz_class out = 1;
    for (std::size_t i = 0; i < count; ++i) out *= static_cast<unsigned long>(top - i);
    return Rational(out);
}

template <class T>
Poly<T> convert(const RationalPoly& p) {
    if constexpr (is_rational_v<T>) {
        return p;
    } else {
        return poly::to_float(p);
    }
}

// Complement Gram matrix sum_{j not in T} y_j y_j^T.
template <class T>
DenseMatrix<T> complement_gram(const SelectionState<T>& state) {
    const auto& frame = state.frame();
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < frame.count(); ++j)
        if (!state.chosen().contains(j)) rest.push_back(j);
    return linalg::subset_gram(frame, rest);
}

// x^{m-n-t} det(xI - W) in the Bernstein basis of degree m - t.
BernsteinPoly<double> shifted_complement_charpoly(const SelectionState<double>& state, long shift) {
    auto w = poly::symmetric_eigenvalues(complement_gram(state));
    std::size_t drop = 0;
    if (shift < 0) {
        // rank(W) <= m - t < n: the |shift| smallest eigenvalues are zero.
        drop = static_cast<std::size_t>(-shift);
        for (std::size_t i = 0; i < drop; ++i)
            if (std::abs(w[i]) > 1e-6)
                throw NumericError("conditional_poly: complement Gram has eigenvalue " +
                                   std::to_string(w[i]) + " where zero is forced; frame not isotropic?");
    }
    BernsteinPoly<double> out;
    for (std::size_t i = drop; i < w.size(); ++i) out = out.times_linear(w[i]);
    if (shift > 0) out = out.times_x_power(static_cast<std::size_t>(shift));
    return out;
}

BernsteinPoly<Rational> shifted_complement_charpoly(const SelectionState<Rational>& state, long shift) {
    RationalPoly q = poly::charpoly_gram(complement_gram(state));
    if (shift >= 0) {
        q = q.shifted(static_cast<std::size_t>(shift));
    } else {
        q = poly::deflate_power(q, DeflationBase::X, static_cast<std::size_t>(-shift));
    }
    const auto degree = static_cast<std::size_t>(static_cast<long>(state.params().n) + shift);
    return BernsteinPoly<Rational>::from_monomial(q, degree);
}

} // namespace

FamilyParams FamilyParams::make(std::size_t m, std::size_t n, std::size_t k) {
    if (n < 1) throw InputError("n must be at least 1");
    if (k < 1 || k > m) throw InputError("k must lie in [1, m]");
    if (n > m) throw InputError("n must not exceed m");
    return FamilyParams{m, n, k};
}

RationalPoly f_empty_unnormalized(const FamilyParams& p) {
    const auto base = RationalPoly::x_minus_one_power(p.m - p.n).shifted(p.n);
    RationalPoly d = base.derivative(p.k);
    if (p.m >= p.n + p.k) {
        return poly::deflate_power(d, DeflationBase::XMinusOne, p.m - p.n - p.k);
    }
    return d * RationalPoly::x_minus_one_power(p.k + p.n - p.m);
}

template <class T>
Poly<T> f_empty(const FamilyParams& params) {
    const RationalPoly raw = f_empty_unnormalized(params);
    if (raw.degree() != params.n) throw NumericError("f_empty: degree is not n");
    return convert<T>(raw.monic());
}

template <class T>
Poly<T> g_empty(const FamilyParams& p) {
    if (p.k > p.n) throw InputError("g_empty defined only for k <= n");
    RationalPoly raw = f_empty_unnormalized(p);
    if (p.k % 2 == 1) raw = raw.scaled(Rational(-1));
    return convert<T>(poly::deflate_power(raw, DeflationBase::X, p.n - p.k));
}

template <class T>
std::vector<T> g_empty_bernstein(const FamilyParams& p) {
    if (p.k > p.n) throw InputError("g_empty defined only for k <= n");
    std::vector<T> c(p.k + 1, T(0));
    for (std::size_t i = 0; i <= p.k && i <= p.m - p.n; ++i) {
        // (-1)^i n!/(n-k+i)! (m-n)!/(m-n-i)!
        Rational v = falling_factorial(p.n, p.k - i) * falling_factorial(p.m - p.n, i);
        if (i % 2 == 1) v = -v;
        if constexpr (is_rational_v<T>) {
            c[i] = v;
        } else {
            c[i] = v.get_d();
        }
    }
    return c;
}

template <class T>
SelectionState<T> SelectionState<T>::root(std::shared_ptr<const linalg::Frame<T>> frame, std::size_t k) {
    if (!frame) throw InputError("SelectionState: null frame");
    const auto params = FamilyParams::make(frame->count(), frame->dim(), k);
    DenseMatrix<T> gram(frame->dim(), frame->dim());
    return SelectionState(std::move(frame), params, linalg::SubsetIndex{}, std::move(gram));
}

template <class T>
SelectionState<T> SelectionState<T>::with(std::size_t column) const {
    if (chosen_.size() >= params_.k) throw InputError("SelectionState: already holds k columns");
    auto next = chosen_.with(column, params_.m);
    DenseMatrix<T> gram = gram_;
    const std::size_t n = params_.n;
    for (std::size_t a = 0; a < n; ++a) {
        const T& ya = frame_->at(a, column);
        if (is_exact_zero(ya)) continue;
        for (std::size_t b = 0; b < n; ++b) gram(a, b) += ya * frame_->at(b, column);
    }
    return SelectionState(frame_, params_, std::move(next), std::move(gram));
}

template <class T>
BernsteinPoly<T> conditional_poly_bernstein(const SelectionState<T>& state) {
    const auto& p = state.params();
    const std::size_t t = state.chosen().size();
    if (t > p.k) throw InputError("conditional_poly: more than k columns chosen");
    const long shift = static_cast<long>(p.m) - static_cast<long>(p.n) - static_cast<long>(t);
    BernsteinPoly<T> g = shifted_complement_charpoly(state, shift).derivative(p.k - t);
    const long s = static_cast<long>(p.m) - static_cast<long>(p.n) - static_cast<long>(p.k);
    if (s > 0) {
        g = g.divided_by_x_power(static_cast<std::size_t>(s), 1e-12);
    } else if (s < 0) {
        g = g.times_x_power(static_cast<std::size_t>(-s));
    }
    return g.reflected();
}

template <class T>
Poly<T> conditional_poly(const SelectionState<T>& state) {
    return conditional_poly_bernstein(state).to_monomial().monic();
}

double choose_count(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    return poly::binomial<double>(n, k);
}

template <class T>
Poly<T> brute_force_average(const linalg::Frame<T>& frame, std::size_t k, const linalg::SubsetIndex& chosen) {
    const std::size_t m = frame.count();
    const std::size_t t = chosen.size();
    if (k < t || k > m) throw InputError("brute_force_average: need #chosen <= k <= m");
    if (!chosen.empty() && chosen[t - 1] >= m) throw InputError("brute_force_average: chosen out of range");
    const double count = choose_count(m - t, k - t);
    if (count > kBruteForceLimit)
        throw InputError("brute_force_average: " + std::to_string(count) + " subsets exceeds 10^6 guard");
    std::vector<std::size_t> pool;
    for (std::size_t j = 0; j < m; ++j)
        if (!chosen.contains(j)) pool.push_back(j);
    Poly<T> sum;
    std::vector<std::size_t> subset;
    for_each_combination(pool, k - t, [&](const std::vector<std::size_t>& extra) {
        subset.assign(chosen.indices().begin(), chosen.indices().end());
        subset.insert(subset.end(), extra.begin(), extra.end());
        sum = sum + poly::charpoly_gram(linalg::subset_gram(frame, subset));
    });
    return sum.monic();
}

bool knh_identity_check(std::size_t m, std::size_t n, std::size_t k) {
    if (!(n <= k && k <= m)) throw InputError("knh_identity_check: need n <= k <= m");
    const auto lhs = RationalPoly::x_minus_one_power(m - n).shifted(n).derivative(k);
    const auto inner = RationalPoly::x_minus_one_power(m - k).shifted(k).derivative(n);
    RationalPoly rhs;
    try {
        rhs = poly::deflate_power(inner, DeflationBase::X, k - n);
    } catch (const NumericError&) {
        return false;
    }
    rhs = rhs.scaled(falling_factorial(m - n, k - n));
    return lhs == rhs;
}

template Poly<double> f_empty<double>(const FamilyParams&);
template Poly<Rational> f_empty<Rational>(const FamilyParams&);
template Poly<double> g_empty<double>(const FamilyParams&);
template Poly<Rational> g_empty<Rational>(const FamilyParams&);
template std::vector<double> g_empty_bernstein<double>(const FamilyParams&);
template std::vector<Rational> g_empty_bernstein<Rational>(const FamilyParams&);
template class SelectionState<double>;
template class SelectionState<Rational>;
template BernsteinPoly<double> conditional_poly_bernstein<double>(const SelectionState<double>&);
template BernsteinPoly<Rational> conditional_poly_bernstein<Rational>(const SelectionState<Rational>&);
template Poly<double> conditional_poly<double>(const SelectionState<double>&);
template Poly<Rational> conditional_poly<Rational>(const SelectionState<Rational>&);
template Poly<double> brute_force_average<double>(const linalg::Frame<double>&, std::size_t,
                                                  const linalg::SubsetIndex&);
template Poly<Rational> brute_force_average<Rational>(const linalg::Frame<Rational>&, std::size_t,
                                                      const linalg::SubsetIndex&);

} // namespace subsel::expected
