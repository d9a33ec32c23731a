#include "subsel/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "subsel/error.hpp"

namespace subsel::bounds {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InputError(what);
}

double alpha_from_h(double h) {
    if (h < -kRadicandClamp || h > 1.0 + kRadicandClamp)
        throw NumericError("alpha: h = " + std::to_string(h) + " outside [0, 1]");
    h = std::clamp(h, 0.0, 1.0);
    return 0.5 + 0.5 * std::sqrt(1.0 - h);
}

void require_bound_domain(std::size_t m, std::size_t n, std::size_t k) {
    require(n >= 1, "n must be at least 1");
    require(m >= n + 1, "bounds require m >= n + 1");
    require(k >= 1 && k <= m, "k must lie in [1, m]");
}

} // namespace

double h1(double m, double x2, double x3) {
    require(x3 >= 1.0, "h1: x3 must be >= 1 (denominator x3^2)");
    require(x2 >= 1.0, "h1: x2 must be >= 1 (denominator (m - x2) x2)");
    require(m > x2, "h1: m must exceed x2 (denominator (m - x2) x2)");
    return 4.0 * (x3 - 1.0) / (x3 * x3) * (1.0 - (x3 - 1.0) * (m - x3 + 1.0) / ((m - x2) * x2));
}

double h2(double m, double x2, double x3) {
    require(x3 >= 1.0, "h2: x3 must be >= 1 (denominator (m - x3) x3)");
    require(m > x3, "h2: m must exceed x3 (denominator (m - x3) x3)");
    require(m > x2, "h2: m must exceed x2 (denominator (m - x2)^2)");
    return 4.0 * (x2 + 1.0 - x3) * (m - x2 - 1.0) * (x2 + x3 + 1.0 - m) /
           ((m - x3) * x3 * (m - x2) * (m - x2));
}

std::string_view to_string(AlphaBranch b) {
    switch (b) {
    case AlphaBranch::H1KLeN: return "h1:k<=n";
    case AlphaBranch::H1KGeN: return "h1:k>=n";
    case AlphaBranch::H2KLeN: return "h2:k<=n";
    case AlphaBranch::H2KGeN: return "h2:k>=n";
    case AlphaBranch::WholeSet: return "k=m";
    }
    return "?";
}

std::optional<AlphaBranch> alpha_branch_from_string(std::string_view s) {
    for (auto b : {AlphaBranch::H1KLeN, AlphaBranch::H1KGeN, AlphaBranch::H2KLeN, AlphaBranch::H2KGeN,
                   AlphaBranch::WholeSet})
        if (to_string(b) == s) return b;
    return std::nullopt;
}

Alpha alpha(std::size_t m, std::size_t n, std::size_t k) {
    require_bound_domain(m, n, k);
    if (k == m) return {1.0, AlphaBranch::WholeSet};
    const bool k_le_n = k <= n;
    const double x2 = static_cast<double>(k_le_n ? n : k);
    const double x3 = static_cast<double>(k_le_n ? k : n);
    const double md = static_cast<double>(m);
    if (m >= n + k) {
        const double value = alpha_from_h(h1(md, x2, x3));
        if (m == n + k) {
            const double other = alpha_from_h(h2(md, x2, x3));
            if (std::abs(value - other) > kBranchAgreement)
                throw NumericError("alpha: h1 and h2 branches disagree at m = n + k");
        }
        return {value, k_le_n ? AlphaBranch::H1KLeN : AlphaBranch::H1KGeN};
    }
    return {alpha_from_h(h2(md, x2, x3)), k_le_n ? AlphaBranch::H2KLeN : AlphaBranch::H2KGeN};
}

double main_bound_with_alpha(std::size_t m, std::size_t n, std::size_t k, double alpha_value) {
    const double gap = static_cast<double>(n > k ? n - k : k - n) + 1.0;
    const double spread = static_cast<double>(std::min(k, n) * m) - static_cast<double>(n * k);
    return gap / (alpha_value * spread + gap);
}

double main_bound(std::size_t m, std::size_t n, std::size_t k) {
    return main_bound_with_alpha(m, n, k, alpha(m, n, k).value);
}

double corollary_bound(std::size_t m, std::size_t n) {
    require(n >= 1 && m >= n + 1, "corollary_bound requires m >= n + 1");
    const double md = static_cast<double>(m);
    const double nd = static_cast<double>(n);
    const double a = m >= 2 * n ? alpha_from_h(h1(md, nd, nd)) : alpha_from_h(h2(md, nd, nd));
    const double out = 1.0 / (a * nd * (md - nd) + 1.0);
    if (std::abs(out - main_bound(m, n, n)) > 1e-12)
        throw NumericError("corollary_bound disagrees with main_bound(m, n, n)");
    return out;
}

double g1(double m, double x) {
    require(x >= 2.0 && x <= m - 1.0, "g1: need 2 <= x <= m - 1");
    return (x - std::sqrt(x * (m - x) / (m - 1.0))) / m;
}

double g2(double m, double x) {
    require(x >= 3.0 && x <= m - 1.0, "g2: need 3 <= x <= m - 1");
    double arg = (m - 2.0 * x) / (m - 2.0) * std::sqrt((m - 1.0) / (x * (m - x)));
    if (arg < -1.0 - kRadicandClamp || arg > 1.0 + kRadicandClamp)
        throw InputError("g2: arccos argument outside [-1, 1]");
    arg = std::clamp(arg, -1.0, 1.0);
    return x / m + 2.0 / m * std::sqrt(x * (m - x) / (m - 1.0)) *
                       std::cos(std::acos(arg) / 3.0 + 2.0 * std::numbers::pi / 3.0);
}

std::optional<double> explicit_bound(std::size_t m, std::size_t n, std::size_t k) {
    const double md = static_cast<double>(m);
    auto pick = [&](std::size_t which, std::size_t x) -> std::optional<double> {
        if (x + 1 > m) return std::nullopt;
        return which == 2 ? g1(md, static_cast<double>(x)) : g2(md, static_cast<double>(x));
    };
    if (k <= n && (k == 2 || k == 3)) return pick(k, n);
    if (k >= n && (n == 2 || n == 3)) return pick(n, k);
    return std::nullopt;
}

double hong_pan(std::size_t m, std::size_t n) {
    return 1.0 / (static_cast<double>(n) * static_cast<double>(m - n) + 1.0);
}

double hong_pan_n2(std::size_t m) {
    const double md = static_cast<double>(m);
    return (2.0 - std::sqrt(2.0) * std::sqrt((md - 2.0) / (md - 1.0))) / md;
}

double greedy_baseline(std::size_t m, std::size_t n, std::size_t k) {
    const double gap = static_cast<double>(k - n + 1);
    return gap / (static_cast<double>(n) * static_cast<double>(m - k) + gap);
}

double xu21(std::size_t m, std::size_t n, std::size_t k) {
    const double md = static_cast<double>(m);
    const double a = std::sqrt(static_cast<double>(k + 1) * static_cast<double>(m - n));
    const double b = std::sqrt(static_cast<double>(n) * static_cast<double>(m - k - 1));
    return (a - b) * (a - b) / (md * md);
}

double spielman17(std::size_t m, std::size_t n, std::size_t k) {
    const double r = 1.0 - std::sqrt(static_cast<double>(k) / static_cast<double>(n));
    return r * r * static_cast<double>(n) / static_cast<double>(m);
}

std::map<std::string, double> baseline_bounds(std::size_t m, std::size_t n, std::size_t k) {
    require_bound_domain(m, n, k);
    std::map<std::string, double> out;
    if (k == n) out[kHongPan] = hong_pan(m, n);
    if (k == 2 && n == 2) out[kHongPanN2] = hong_pan_n2(m);
    if (n <= k && k + 1 <= m) {
        out[kGreedy] = greedy_baseline(m, n, k);
        out[kXu21] = xu21(m, n, k);
    }
    if (k < n) out[kSpielman17] = spielman17(m, n, k);
    return out;
}

BoundReport compare_report(std::size_t m, std::size_t n, std::size_t k) {
    BoundReport r;
    r.m = m;
    r.n = n;
    r.k = k;
    const Alpha a = alpha(m, n, k);
    r.alpha = a.value;
    r.alpha_branch = a.branch;
    r.main_bound = main_bound_with_alpha(m, n, k, a.value);
    r.explicit_bound = explicit_bound(m, n, k);
    r.baselines = baseline_bounds(m, n, k);
    for (const auto& [name, value] : r.baselines) r.dominates[name] = r.main_bound > value;
    return r;
}

} // namespace subsel::bounds
