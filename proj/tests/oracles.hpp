#pragma once

// Reference computations used only by the tests. They avoid the library's
// own routines so that agreement means something.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "subsel/dense.hpp"
#include "subsel/linalg.hpp"
#include "subsel/poly.hpp"

namespace oracle {

using subsel::DenseMatrix;
using subsel::Rational;

// min(k, r)-th singular value of the selected columns through a two-sided
// Jacobi SVD.
inline double sigma_min_jacobi(const Eigen::MatrixXd& a, const std::vector<std::size_t>& cols, std::size_t r) {
    Eigen::MatrixXd block(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) block.col(static_cast<Eigen::Index>(j)) = a.col(cols[j]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(block);
    const auto idx = std::min(cols.size(), r);
    if (idx == 0 || static_cast<Eigen::Index>(idx) > svd.singularValues().size()) return 0.0;
    return svd.singularValues()(static_cast<Eigen::Index>(idx) - 1);
}

// Determinant by Gaussian elimination over Q.
inline Rational det(std::vector<std::vector<Rational>> a) {
    const std::size_t n = a.size();
    Rational out = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            out = -out;
        }
        out *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (std::size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return out;
}

// det(xI - M) from sums of principal minors: coefficient of x^{n-j} is
// (-1)^j e_j(M).
inline subsel::poly::RationalPoly charpoly_minors(const DenseMatrix<Rational>& m) {
    const std::size_t n = m.rows();
    std::vector<Rational> c(n + 1, Rational(0));
    c[n] = 1;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        std::vector<std::vector<Rational>> sub(idx.size(), std::vector<Rational>(idx.size()));
        for (std::size_t i = 0; i < idx.size(); ++i)
            for (std::size_t j = 0; j < idx.size(); ++j) sub[i][j] = m(idx[i], idx[j]);
        Rational minor = det(sub);
        if (idx.size() % 2 == 1) minor = -minor;
        c[n - idx.size()] += minor;
    }
    return subsel::poly::RationalPoly(c);
}

inline DenseMatrix<Rational> gram_of(const subsel::linalg::RationalFrame& f, const std::vector<std::size_t>& s) {
    const std::size_t n = f.dim();
    DenseMatrix<Rational> g(n, n);
    for (std::size_t j : s)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) g(a, b) += f.at(a, j) * f.at(b, j);
    return g;
}

inline void combinations(std::size_t m, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> s(k);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
        if (pos == k) {
            f(s);
            return;
        }
        for (std::size_t j = start; j + (k - pos) <= m; ++j) {
            s[pos] = j;
            rec(pos + 1, j + 1);
        }
    };
    rec(0, 0);
}

// Monic average of det(xI - Y_S Y_S^T) over k-subsets S containing `chosen`,
// via principal minors.
inline subsel::poly::RationalPoly average_charpoly(const subsel::linalg::RationalFrame& f, std::size_t k,
                                                  const std::vector<std::size_t>& chosen) {
    const std::size_t m = f.count();
    subsel::poly::RationalPoly sum;
    combinations(m, k, [&](const std::vector<std::size_t>& s) {
        for (std::size_t c : chosen)
            if (std::find(s.begin(), s.end(), c) == s.end()) return;
        sum = sum + charpoly_minors(gram_of(f, s));
    });
    return sum.monic();
}

// Float version with Eigen's symmetric eigensolver: product of (x - lambda).
inline subsel::poly::FloatPoly average_charpoly(const subsel::linalg::IsotropicFrame& f, std::size_t k) {
    const std::size_t m = f.count();
    const std::size_t n = f.dim();
    std::vector<double> acc(n + 1, 0.0);
    double count = 0.0;
    combinations(m, k, [&](const std::vector<std::size_t>& s) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
        for (std::size_t j : s)
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = 0; b < n; ++b) g(a, b) += f.at(a, j) * f.at(b, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
        std::vector<double> c{1.0};
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            std::vector<double> next(c.size() + 1, 0.0);
            for (std::size_t d = 0; d < c.size(); ++d) {
                next[d + 1] += c[d];
                next[d] -= es.eigenvalues()(i) * c[d];
            }
            c = next;
        }
        for (std::size_t d = 0; d <= n; ++d) acc[d] += c[d];
        count += 1.0;
    });
    for (auto& v : acc) v /= count;
    return subsel::poly::FloatPoly(acc);
}

// Real roots of a cubic a x^3 + b x^2 + c x + d with three real roots, by
// bisection on sign changes between the critical points.
inline std::vector<double> cubic_roots(double a, double b, double c, double d, double lo, double hi) {
    auto f = [&](double x) { return ((a * x + b) * x + c) * x + d; };
    const double disc = std::sqrt(std::max(0.0, 4 * b * b - 12 * a * c));
    std::vector<double> cuts{lo, (-2 * b - disc) / (6 * a), (-2 * b + disc) / (6 * a), hi};
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double l = cuts[i], h = cuts[i + 1];
        if (f(l) * f(h) > 0) continue;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (l + h);
            ((f(l) <= 0) == (f(mid) <= 0) ? l : h) = mid;
        }
        out.push_back(0.5 * (l + h));
    }
    return out;
}

inline Rational q(long p, long d = 1) {
    Rational r(p);
    r /= Rational(d);
    return r;
}

} // namespace oracle
