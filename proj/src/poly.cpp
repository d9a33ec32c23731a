#include "subsel/poly.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "subsel/linalg.hpp"

namespace subsel::poly {
namespace {

// Horner value together with a running bound on |a_i||x|^i, the scale that
// rounding error in the evaluation is proportional to.
struct Evaluation {
    double value;
    double scale;
};

Evaluation evaluate(const std::vector<double>& c, double x) {
    double v = 0.0;
    double s = 0.0;
    const double ax = std::abs(x);
    for (std::size_t i = c.size(); i-- > 0;) {
        v = v * x + c[i];
        s = s * ax + std::abs(c[i]);
    }
    return {v, s};
}

double derivative_value(const std::vector<double>& c, double x) {
    double v = 0.0;
    for (std::size_t i = c.size(); i-- > 1;) v = v * x + static_cast<double>(i) * c[i];
    return v;
}

// Parlett-Reinsch balancing with radix 2.
void balance(Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    constexpr double radix = 2.0;
    constexpr double radix2 = radix * radix;
    bool converged = false;
    while (!converged) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0;
            double r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(a(j, i));
                r += std::abs(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            double g = r / radix;
            while (c < g) {
                f *= radix;
                c *= radix2;
            }
            g = r * radix;
            while (c >= g) {
                f /= radix;
                c /= radix2;
            }
            if ((c + r) / f < 0.95 * s) {
                converged = false;
                a.col(i) *= f;
                a.row(i) /= f;
            }
        }
    }
}

double cauchy_bound(const std::vector<double>& c) {
    const double lead = std::abs(c.back());
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < c.size(); ++i) worst = std::max(worst, std::abs(c[i]) / lead);
    return 1.0 + worst;
}

// Roots in ascending order. p must be real-rooted with nonzero leading
// coefficient; the roots of p' are used as brackets.
std::vector<double> roots_between_critical_points(const std::vector<double>& c) {
    const std::size_t d = c.size() - 1;
    if (d == 0) return {};
    if (d == 1) return {-c[0] / c[1]};
    std::vector<double> dc(d);
    for (std::size_t i = 1; i <= d; ++i) dc[i - 1] = static_cast<double>(i) * c[i];
    const std::vector<double> crit = roots_between_critical_points(dc);
    const double bound = cauchy_bound(c);
    std::vector<double> out;
    out.reserve(d);
    for (std::size_t iv = 0; iv < d; ++iv) {
        double lo = iv == 0 ? -bound : crit[iv - 1];
        double hi = iv == d - 1 ? bound : crit[iv];
        if (hi < lo) std::swap(lo, hi);
        Evaluation flo = evaluate(c, lo);
        Evaluation fhi = evaluate(c, hi);
        if (flo.value == 0.0) {
            out.push_back(lo);
            continue;
        }
        if (fhi.value == 0.0) {
            out.push_back(hi);
            continue;
        }
        if ((flo.value < 0.0) != (fhi.value < 0.0)) {
            for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() *
                                                       (1.0 + std::abs(lo) + std::abs(hi));
                 ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = evaluate(c, mid).value;
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm < 0.0) == (flo.value < 0.0)) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push_back(0.5 * (lo + hi));
            continue;
        }
        // No sign change: the root coincides with a critical point (multiple
        // root). Accept the endpoint only if p vanishes there to rounding level.
        const Evaluation& best = std::abs(flo.value) <= std::abs(fhi.value) ? flo : fhi;
        const double where = std::abs(flo.value) <= std::abs(fhi.value) ? lo : hi;
        if (std::abs(best.value) > 1e-7 * best.scale)
            throw NumericError("polynomial not numerically real-rooted");
        out.push_back(where);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

FloatPoly to_float(const RationalPoly& p) {
    std::vector<double> c;
    c.reserve(p.coeffs().size());
    for (const auto& v : p.coeffs()) c.push_back(v.get_d());
    return FloatPoly(std::move(c));
}

RootList real_roots(const FloatPoly& p) {
    if (p.is_zero()) throw InputError("real_roots: zero polynomial");
    for (double v : p.coeffs())
        if (!std::isfinite(v)) throw NumericError("real_roots: non-finite coefficient");
    RootList out;
    std::vector<double> c = p.coeffs();
    std::size_t zeros = 0;
    while (c.size() > 1 && c[zeros] == 0.0) ++zeros;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(zeros));
    const std::size_t d = c.size() - 1;

    std::vector<double> found;
    if (d == 1) {
        found.push_back(-c[0] / c[1]);
        out.method = RootList::Method::Exact;
    } else if (d >= 2) {
        Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        for (std::size_t i = 1; i < d; ++i)
            comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
        for (std::size_t i = 0; i < d; ++i)
            comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -c[i] / c[d];
        balance(comp);
        Eigen::EigenSolver<Eigen::MatrixXd> eig(comp, false);
        if (eig.info() != Eigen::Success) throw NumericError("real_roots: eigenvalue iteration failed");
        double radius = 0.0;
        double imag = 0.0;
        for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
            const auto z = eig.eigenvalues()(i);
            radius = std::max(radius, std::abs(z));
            imag = std::max(imag, std::abs(z.imag()));
            found.push_back(z.real());
        }
        out.residual_imag = imag;
        out.method = RootList::Method::Companion;
        if (imag > kRealRootTolerance * (1.0 + radius)) {
            found = roots_between_critical_points(c);
            out.method = RootList::Method::InterlacingBisection;
        } else {
            for (double& r : found) {
                const double fr = evaluate(c, r).value;
                const double dr = derivative_value(c, r);
                if (dr == 0.0 || fr == 0.0) continue;
                const double step = fr / dr;
                const double candidate = r - step;
                if (std::abs(step) <= 1e-3 * (1.0 + std::abs(r)) &&
                    std::abs(evaluate(c, candidate).value) < std::abs(fr))
                    r = candidate;
            }
        }
    }
    found.insert(found.end(), zeros, 0.0);
    std::sort(found.begin(), found.end(), std::greater<>());
    out.roots = std::move(found);
    return out;
}

// Real roots of an exactly real-rooted polynomial, ascending, in 320-bit
// floating point. The roots of p' split the line into intervals holding one
// root each; a root shared with p' shows up as a critical point where p
// vanishes and no interval changes sign.
using Mpf = mpf_class;
constexpr mp_bitcnt_t kPolishBits = 320;

static Mpf horner(const std::vector<Mpf>& c, const Mpf& x) {
    Mpf f(0, kPolishBits);
    for (std::size_t i = c.size(); i-- > 0;) f = f * x + c[i];
    return f;
}

static Mpf horner_abs(const std::vector<Mpf>& c, const Mpf& x) {
    Mpf f(0, kPolishBits);
    const Mpf ax = abs(x);
    for (std::size_t i = c.size(); i-- > 0;) f = f * ax + abs(c[i]);
    return f;
}

static std::vector<Mpf> interlaced_roots(const std::vector<Mpf>& c, const Mpf& bound) {
    const std::size_t d = c.size() - 1;
    if (d == 1) return {Mpf(-c[0] / c[1], kPolishBits)};
    std::vector<Mpf> dc;
    dc.reserve(d);
    for (std::size_t i = 1; i <= d; ++i) dc.emplace_back(c[i] * static_cast<unsigned long>(i), kPolishBits);
    std::vector<Mpf> cuts{Mpf(-bound, kPolishBits)};
    for (auto& r : interlaced_roots(dc, bound)) cuts.push_back(r);
    cuts.emplace_back(bound, kPolishBits);

    const Mpf tiny("1e-60", kPolishBits);
    const Mpf slack("1e-30", kPolishBits);
    std::vector<Mpf> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Mpf lo(cuts[i], kPolishBits), hi(cuts[i + 1], kPolishBits);
        const Mpf f_lo = horner(c, lo), f_hi = horner(c, hi);
        const int s_lo = sgn(f_lo), s_hi = sgn(f_hi);
        if (s_lo == 0 || s_hi == 0 || s_lo == s_hi) {
            // Multiple root sitting on a critical point (or an exact endpoint hit).
            const Mpf& pick = abs(f_lo) <= abs(f_hi) ? lo : hi;
            const Mpf f = horner(c, pick);
            if (abs(f) > slack * horner_abs(c, pick))
                throw NumericError("real_roots: polynomial is not real-rooted");
            out.push_back(pick);
            continue;
        }
        Mpf x((lo + hi) / 2, kPolishBits);
        Mpf checkpoint(hi - lo, kPolishBits);
        for (int it = 1; it <= 2000 && hi - lo > tiny * (1 + abs(x)); ++it) {
            Mpf f(0, kPolishBits), f1(0, kPolishBits);
            for (std::size_t j = d + 1; j-- > 0;) {
                f1 = f1 * x + f;
                f = f * x + c[j];
            }
            if (sgn(f) == 0) break;
            if (sgn(f) == s_lo) lo = x; else hi = x;
            Mpf next(x, kPolishBits);
            if (sgn(f1) != 0) next = x - f / f1;
            if (abs(next - x) <= tiny * (1 + abs(x))) {
                x = next;
                break;
            }
            // Newton creeps from far away at high degree; bisect unless the
            // bracket halved over the last few steps.
            bool bisect = !(next > lo && next < hi);
            if (it % 4 == 0) {
                if (hi - lo > checkpoint / 2) bisect = true;
                checkpoint = hi - lo;
            }
            x = bisect ? Mpf((lo + hi) / 2, kPolishBits) : next;
        }
        out.push_back(x);
    }
    return out;
}

RootList real_roots(const RationalPoly& p) {
    if (p.is_zero()) throw InputError("real_roots: zero polynomial");
    std::size_t zeros = 0;
    while (sgn(p.coeffs()[zeros]) == 0) ++zeros;
    const auto reduced = deflate_power(p, DeflationBase::X, zeros);
    RootList out;
    out.method = RootList::Method::Exact;
    if (reduced.degree() > 0) {
        std::vector<Mpf> c;
        Mpf bound(0, kPolishBits);
        for (const auto& v : reduced.coeffs()) c.emplace_back(v, kPolishBits);
        // Cauchy bound, padded so that no root sits on an interval end.
        for (std::size_t i = 0; i < reduced.degree(); ++i) {
            const Mpf r = abs(c[i] / c.back());
            if (r > bound) bound = r;
        }
        bound = 2 * (bound + 1);
        for (const auto& r : interlaced_roots(c, bound)) out.roots.push_back(r.get_d());
    }
    out.roots.insert(out.roots.end(), zeros, 0.0);
    std::sort(out.roots.begin(), out.roots.end(), std::greater<>());
    return out;
}

double kth_largest_root(const FloatPoly& p, std::size_t j) {
    if (j == 0 || j > p.degree())
        throw InputError("kth_largest_root: index " + std::to_string(j) + " outside [1, " +
                         std::to_string(p.degree()) + "]");
    return real_roots(p).roots[j - 1];
}

double kth_largest_root(const RationalPoly& p, std::size_t j) {
    if (j == 0 || j > p.degree())
        throw InputError("kth_largest_root: index " + std::to_string(j) + " outside [1, " +
                         std::to_string(p.degree()) + "]");
    return real_roots(p).roots[j - 1];
}

double min_root(const FloatPoly& p) {
    if (p.degree() == 0) throw InputError("min_root: constant polynomial");
    return real_roots(p).roots.back();
}

RationalPoly charpoly_gram(const DenseMatrix<Rational>& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw InputError("charpoly_gram: matrix is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (a(i, j) != a(j, i)) throw InputError("charpoly_gram: matrix is not symmetric");
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
    std::vector<Rational> c(n + 1, Rational(0));
    c[n] = 1;
    DenseMatrix<Rational> m(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        m = a * m;
        for (std::size_t i = 0; i < n; ++i) m(i, i) += c[n - k + 1];
        const auto am = a * m;
        Rational trace(0);
        for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
        c[n - k] = -trace / Rational(static_cast<long>(k));
    }
    return RationalPoly(std::move(c));
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix<double>& a) {
    const Eigen::MatrixXd m = linalg::to_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw NumericError("symmetric eigensolver failed");
    const auto& ev = eig.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

FloatPoly charpoly_gram(const DenseMatrix<double>& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw InputError("charpoly_gram: matrix is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(a(i, j) - a(j, i)) > 1e-12)
                throw InputError("charpoly_gram: matrix is not symmetric");
    if (n == 0) return FloatPoly::constant(1.0);
    return FloatPoly::from_roots(symmetric_eigenvalues(a));
}

} // namespace subsel::poly
