#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace subsel::bounds {

/// h1(m, x2, x3) = 4 (x3-1)/x3^2 (1 - (x3-1)(m-x3+1) / ((m-x2) x2)).
/// Requires x3 >= 1, x2 >= 1, m > x2.
double h1(double m, double x2, double x3);

/// h2(m, x2, x3) = 4 (x2+1-x3)(m-x2-1)(x2+x3+1-m) / ((m-x3) x3 (m-x2)^2).
/// Requires x3 >= 1, m > x3, m > x2.
double h2(double m, double x2, double x3);

/// Which expression produced alpha. The first word is the m vs n+k split
/// (strict: m >= n+k uses h1), the second the k vs n split (k == n counts
/// as k <= n). WholeSet is k == m, where alpha does not enter the bound.
enum class AlphaBranch { H1KLeN, H1KGeN, H2KLeN, H2KGeN, WholeSet };

std::string_view to_string(AlphaBranch b);
std::optional<AlphaBranch> alpha_branch_from_string(std::string_view s);

struct Alpha {
    double value = 1.0;
    AlphaBranch branch = AlphaBranch::WholeSet;
};

inline constexpr double kRadicandClamp = 1e-12;
inline constexpr double kBranchAgreement = 1e-12;

/// alpha = 1/2 + 1/2 sqrt(1 - h). Requires m >= n+1, 1 <= k <= m. At
/// m == n+k the h2 expression is evaluated as well and must agree with h1 to
/// 1e-12 (NumericError otherwise).
Alpha alpha(std::size_t m, std::size_t n, std::size_t k);

/// (|n-k|+1) / (alpha (min(k,n) m - n k) + |n-k|+1).
double main_bound(std::size_t m, std::size_t n, std::size_t k);

/// Same ratio with alpha supplied by the caller.
double main_bound_with_alpha(std::size_t m, std::size_t n, std::size_t k, double alpha_value);

/// 1 / (alpha_{m,n} n (m-n) + 1) using the two-branch k = n alpha.
double corollary_bound(std::size_t m, std::size_t n);

/// g1(m, x) = (x - sqrt(x (m-x) / (m-1))) / m, 2 <= x <= m-1.
double g1(double m, double x);

/// Trigonometric smallest root of the cubic, 3 <= x <= m-1.
double g2(double m, double x);

/// The explicit root value when k or n is 2 or 3 (k<=n uses x = n, k>=n
/// uses x = k), else nullopt.
std::optional<double> explicit_bound(std::size_t m, std::size_t n, std::size_t k);

inline constexpr const char* kHongPan = "hong_pan";
inline constexpr const char* kHongPanN2 = "hong_pan_n2";
inline constexpr const char* kGreedy = "greedy";
inline constexpr const char* kXu21 = "xu21";
inline constexpr const char* kSpielman17 = "spielman17";

double hong_pan(std::size_t m, std::size_t n);
double hong_pan_n2(std::size_t m);
double greedy_baseline(std::size_t m, std::size_t n, std::size_t k);
double xu21(std::size_t m, std::size_t n, std::size_t k);
double spielman17(std::size_t m, std::size_t n, std::size_t k);

/// Baselines applicable on their own domains; absent keys are inapplicable.
std::map<std::string, double> baseline_bounds(std::size_t m, std::size_t n, std::size_t k);

struct BoundReport {
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t k = 0;
    double alpha = 1.0;
    AlphaBranch alpha_branch = AlphaBranch::WholeSet;
    double main_bound = 1.0;
    std::optional<double> explicit_bound;
    std::map<std::string, double> baselines;
    /// main_bound > baseline, per applicable baseline.
    std::map<std::string, bool> dominates;

    friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

/// Requires m >= n+1 and 1 <= k <= m.
BoundReport compare_report(std::size_t m, std::size_t n, std::size_t k);

} // namespace subsel::bounds
