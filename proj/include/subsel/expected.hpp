#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "subsel/linalg.hpp"
#include "subsel/poly.hpp"

namespace subsel::expected {

/// (m, n, k): column count, frame dimension, subset size.
struct FamilyParams {
    std::size_t m = 0;
    std::size_t n = 0;
    std::size_t k = 0;

    /// Validates 1 <= k <= m, 1 <= n <= m.
    static FamilyParams make(std::size_t m, std::size_t n, std::size_t k);

    friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

/// (x-1)^{-(m-n-k)} d^k/dx^k [(x-1)^{m-n} x^n], without the (m-k)!/m!
/// normalization. Always computed exactly.
poly::RationalPoly f_empty_unnormalized(const FamilyParams& params);

/// Monic root-node polynomial: the average of det(xI - Y_S Y_S^T) over all
/// k-subsets of an isotropic frame.
template <class T>
poly::Poly<T> f_empty(const FamilyParams& params);

/// (-1)^k m!/(m-k)! f_empty(x) / x^{n-k}, degree k. Requires k <= n.
template <class T>
poly::Poly<T> g_empty(const FamilyParams& params);

/// Closed-form Bernstein coefficients c_0..c_k of g_empty.
template <class T>
std::vector<T> g_empty_bernstein(const FamilyParams& params);

/// Partial selection T with its accumulated Gram matrix U_T. Values are
/// immutable; `with` returns a new state sharing the frame.
template <class T>
class SelectionState {
public:
    static SelectionState root(std::shared_ptr<const linalg::Frame<T>> frame, std::size_t k);

    SelectionState with(std::size_t column) const;

    const FamilyParams& params() const { return params_; }
    const linalg::SubsetIndex& chosen() const { return chosen_; }
    const DenseMatrix<T>& gram() const { return gram_; }
    const linalg::Frame<T>& frame() const { return *frame_; }
    const std::shared_ptr<const linalg::Frame<T>>& frame_ptr() const { return frame_; }

private:
    SelectionState(std::shared_ptr<const linalg::Frame<T>> frame, FamilyParams params,
                   linalg::SubsetIndex chosen, DenseMatrix<T> gram)
        : frame_(std::move(frame)), params_(params), chosen_(std::move(chosen)), gram_(std::move(gram)) {}

    std::shared_ptr<const linalg::Frame<T>> frame_;
    FamilyParams params_;
    linalg::SubsetIndex chosen_;
    DenseMatrix<T> gram_;
};

/// Node polynomial in the Bernstein basis on [0, 1], up to a nonzero factor:
/// with W = sum_{j not in T} y_j y_j^T and t = #T,
///   G(x) = x^{-(m-n-k)} d^{k-t}/dx^{k-t} [ x^{m-n-t} det(xI - W) ],
/// and the result is G(1 - x). Its roots are those of the average of
/// det(xI - Y_S Y_S^T) over all k-subsets S containing T.
template <class T>
poly::BernsteinPoly<T> conditional_poly_bernstein(const SelectionState<T>& state);

/// Monic node polynomial in the monomial basis.
template <class T>
poly::Poly<T> conditional_poly(const SelectionState<T>& state);

inline constexpr double kBruteForceLimit = 1e6;

/// Monic average of det(xI - Y_S Y_S^T) over all k-subsets S containing
/// `chosen`, by enumeration. Throws InputError when more than 10^6 subsets
/// would be visited.
template <class T>
poly::Poly<T> brute_force_average(const linalg::Frame<T>& frame, std::size_t k,
                                  const linalg::SubsetIndex& chosen);

/// d^k [(x-1)^{m-n} x^n] == (m-n)!/(m-k)! x^{-(k-n)} d^n [(x-1)^{m-k} x^k],
/// checked exactly for n <= k <= m.
bool knh_identity_check(std::size_t m, std::size_t n, std::size_t k);

/// Number of k-subsets, as a double (saturates instead of overflowing).
double choose_count(std::size_t n, std::size_t k);

/// Calls `visit(subset)` for each size-`size` subset of `pool` in lexicographic order.
template <class Visit>
void for_each_combination(const std::vector<std::size_t>& pool, std::size_t size, Visit&& visit) {
    if (size > pool.size()) return;
    std::vector<std::size_t> pos(size);
    for (std::size_t i = 0; i < size; ++i) pos[i] = i;
    std::vector<std::size_t> picked(size);
    while (true) {
        for (std::size_t i = 0; i < size; ++i) picked[i] = pool[pos[i]];
        visit(static_cast<const std::vector<std::size_t>&>(picked));
        std::size_t i = size;
        while (i > 0 && pos[i - 1] == pool.size() - size + (i - 1)) --i;
        if (i == 0) return;
        ++pos[i - 1];
        for (std::size_t j = i; j < size; ++j) pos[j] = pos[j - 1] + 1;
    }
}

} // namespace subsel::expected
