#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "subsel/bounds.hpp"
#include "subsel/expected.hpp"
#include "subsel/linalg.hpp"

namespace subsel::selector {

inline constexpr double kDefaultEpsilon = 1e-10;
inline constexpr double kCertificateSlack = 1e-9;

struct StepTrace {
    std::size_t column = 0;
    double root = 0.0;  ///< decision root of the chosen child

    friend bool operator==(const StepTrace&, const StepTrace&) = default;
};

struct SelectionResult {
    linalg::SubsetIndex subset;
    std::size_t k = 0;
    std::size_t rank = 0;            ///< frame dimension actually used (numerical rank of A)
    double sigma_min = 0.0;          ///< sigma_min(A_S)
    double sigma_min_sq = 0.0;
    double sigma_min_target = 0.0;   ///< smallest nonzero singular value of A
    double root_certificate = 0.0;   ///< decision root of f_empty
    double bound_factor = 0.0;       ///< main_bound(m, rank, k)
    double bound_certificate = 0.0;  ///< bound_factor * sigma_min(A)^2
    bounds::Alpha alpha;
    double epsilon = kDefaultEpsilon;
    std::vector<StepTrace> trace;
};

struct SelectOptions {
    double epsilon = kDefaultEpsilon;
    /// Worker threads for candidate evaluation; 0 reads SUBSEL_THREADS and
    /// falls back to the hardware concurrency.
    unsigned threads = 0;
};

/// Decision root of a node polynomial given in the Bernstein basis on [0,1]:
/// for k <= n the forced zero roots x^{n-k} are divided out and the smallest
/// remaining root is returned (that is r_k); for k > n the smallest root.
double decision_root(const poly::BernsteinPoly<double>& node, const expected::FamilyParams& params);

/// Decision root of the closed-form f_empty (r_k for k <= n, smallest root
/// otherwise). Independent of any frame.
double root_node_decision_root(const expected::FamilyParams& params);

/// main_bound(m, r, k), with the degenerate square case m == r mapped to 1.
double bound_factor(std::size_t m, std::size_t r, std::size_t k, bounds::Alpha* alpha_out = nullptr);

/// Greedy descent of the interlacing family tree over the isotropic frame of
/// A. Each step keeps the child with the largest decision root, ties to the
/// lowest column index.
SelectionResult select_interlacing(const linalg::TargetMatrix& a, std::size_t k,
                                   const SelectOptions& options = {});

/// Exhaustive argmax of sigma_min(A_S); ties to the lexicographically first
/// subset. Requires C(m, k) <= 10^6.
SelectionResult select_brute_force(const linalg::TargetMatrix& a, std::size_t k);

/// Largest root among the children of `state` and the column achieving it.
StepTrace best_child(const expected::SelectionState<double>& state, unsigned threads = 1);

struct Verdict {
    bool subset_valid = false;
    bool value_consistent = false;  ///< reported sigma_min_sq matches recomputation
    bool bound_holds = false;       ///< sigma_min(A_S)^2 >= (1 - k eps) main_bound sigma_min(A)^2 - slack
    bool root_holds = false;        ///< sigma_min(A_S)^2 / sigma_min(A)^2 >= r(f_empty) - slack
    double sigma_min_sq = 0.0;
    double bound_rhs = 0.0;
    double ratio = 0.0;
    double root = 0.0;
    std::vector<std::string> failures;

    bool passed() const { return subset_valid && value_consistent && bound_holds && root_holds; }
};

/// Recomputes every quantity from A and the subset; never throws for a
/// well-formed matrix (problems are reported in the verdict).
Verdict verify_certificate(const linalg::TargetMatrix& a, const SelectionResult& result);

/// Effective worker count for `options.threads`.
unsigned resolve_threads(unsigned requested);

} // namespace subsel::selector
