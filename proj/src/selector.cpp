#include "subsel/selector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

namespace subsel::selector {
namespace {

constexpr double kZeroRootTolerance = 1e-8;

std::string describe(const linalg::SubsetIndex& s) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << '}';
    return os.str();
}

SelectionResult finish(const linalg::TargetMatrix& a, linalg::SubsetIndex subset, std::size_t k,
                       double epsilon) {
    SelectionResult r;
    r.k = k;
    r.rank = a.rank();
    r.subset = std::move(subset);
    r.sigma_min = linalg::sigma_min_sub(a, r.subset, r.rank);
    r.sigma_min_sq = r.sigma_min * r.sigma_min;
    r.sigma_min_target = a.sigma_min();
    r.bound_factor = bound_factor(a.cols(), r.rank, k, &r.alpha);
    r.bound_certificate = r.bound_factor * r.sigma_min_target * r.sigma_min_target;
    r.epsilon = epsilon;
    return r;
}

void validate_k(const linalg::TargetMatrix& a, std::size_t k) {
    if (k < 1) throw InputError("k must be at least 1");
    if (k > a.cols())
        throw InputError("k = " + std::to_string(k) + " exceeds the column count " + std::to_string(a.cols()));
    if (a.rank() == 0) throw InputError("zero matrix has no frame");
}

} // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SUBSEL_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

double decision_root(const poly::BernsteinPoly<double>& node, const expected::FamilyParams& params) {
    const auto n = node.degree();
    if (n != params.n) throw NumericError("decision_root: node degree differs from n");
    if (params.k < n) {
        return poly::min_root(node.divided_by_x_power(n - params.k, kZeroRootTolerance).to_monomial());
    }
    return poly::min_root(node.to_monomial());
}

double root_node_decision_root(const expected::FamilyParams& params) {
    if (params.k <= params.n) return poly::min_root(expected::g_empty<double>(params));
    return poly::min_root(expected::f_empty<double>(params));
}

double bound_factor(std::size_t m, std::size_t r, std::size_t k, bounds::Alpha* alpha_out) {
    bounds::Alpha a{1.0, bounds::AlphaBranch::WholeSet};
    double out = 1.0;
    // m == r: Y is orthogonal, every subset has sigma_min(Y_S) = 1.
    if (m > r) {
        a = bounds::alpha(m, r, k);
        out = bounds::main_bound_with_alpha(m, r, k, a.value);
    }
    if (alpha_out) *alpha_out = a;
    return out;
}

StepTrace best_child(const expected::SelectionState<double>& state, unsigned threads) {
    const auto& params = state.params();
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < params.m; ++j)
        if (!state.chosen().contains(j)) candidates.push_back(j);
    if (candidates.empty()) throw InputError("best_child: no candidates left");

    std::vector<double> roots(candidates.size(), -std::numeric_limits<double>::infinity());
    std::vector<std::exception_ptr> errors(candidates.size());
    auto evaluate = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < candidates.size(); i += stride) {
            try {
                const auto child = state.with(candidates[i]);
                roots[i] = decision_root(expected::conditional_poly_bernstein(child), params);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned workers = static_cast<unsigned>(
        std::min<std::size_t>(std::max(1u, threads), candidates.size() / 4 + 1));
    if (workers <= 1) {
        evaluate(0, 1);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(evaluate, w, workers);
    }

    StepTrace best{candidates.front(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (errors[i]) {
            try {
                std::rethrow_exception(errors[i]);
            } catch (const std::exception& e) {
                throw NumericError("root finding failed at node " + describe(state.chosen()) + " + column " +
                                   std::to_string(candidates[i]) + ": " + e.what());
            }
        }
        if (roots[i] > best.root) best = {candidates[i], roots[i]};
    }
    return best;
}

SelectionResult select_interlacing(const linalg::TargetMatrix& a, std::size_t k, const SelectOptions& options) {
    validate_k(a, k);
    if (!(options.epsilon > 0.0 && options.epsilon < 1.0 / static_cast<double>(k)))
        throw InputError("epsilon must lie in (0, 1/k)");
    auto svd = linalg::thin_svd(a);
    auto frame = std::make_shared<const linalg::IsotropicFrame>(std::move(svd.frame));
    auto state = expected::SelectionState<double>::root(frame, k);
    const unsigned threads = resolve_threads(options.threads);

    double root_certificate = 0.0;
    try {
        root_certificate = decision_root(expected::conditional_poly_bernstein(state), state.params());
    } catch (const std::exception& e) {
        throw NumericError(std::string("root finding failed at the root node: ") + e.what());
    }

    std::vector<StepTrace> trace;
    trace.reserve(k);
    for (std::size_t step = 0; step < k; ++step) {
        const StepTrace pick = best_child(state, threads);
        state = state.with(pick.column);
        trace.push_back(pick);
    }
    SelectionResult r = finish(a, state.chosen(), k, options.epsilon);
    r.root_certificate = root_certificate;
    r.trace = std::move(trace);
    return r;
}

SelectionResult select_brute_force(const linalg::TargetMatrix& a, std::size_t k) {
    validate_k(a, k);
    const std::size_t m = a.cols();
    if (expected::choose_count(m, k) > expected::kBruteForceLimit)
        throw InputError("select_brute_force: C(m, k) exceeds the 10^6 guard");
    const std::size_t r = a.rank();
    std::vector<std::size_t> pool(m);
    for (std::size_t j = 0; j < m; ++j) pool[j] = j;
    double best = -1.0;
    std::vector<std::size_t> best_subset;
    expected::for_each_combination(pool, k, [&](const std::vector<std::size_t>& s) {
        const double v = linalg::sigma_min_sub(a, linalg::SubsetIndex::from(s, m), r);
        if (v > best) {
            best = v;
            best_subset = s;
        }
    });
    SelectionResult out = finish(a, linalg::SubsetIndex::from(best_subset, m), k, kDefaultEpsilon);
    const auto params = expected::FamilyParams::make(m, r, k);
    out.root_certificate = root_node_decision_root(params);
    return out;
}

Verdict verify_certificate(const linalg::TargetMatrix& a, const SelectionResult& result) {
    Verdict v;
    const std::size_t m = a.cols();
    const std::size_t k = result.subset.size();
    v.subset_valid = k >= 1 && k <= m && result.subset[k - 1] < m && (result.k == 0 || result.k == k) &&
                     a.rank() > 0;
    if (!v.subset_valid) {
        v.failures.push_back("subset is not a valid k-subset of the columns");
        return v;
    }
    const std::size_t r = a.rank();
    const double sigma = linalg::sigma_min_sub(a, result.subset, r);
    v.sigma_min_sq = sigma * sigma;
    const double target_sq = a.sigma_min() * a.sigma_min();
    const double factor = bound_factor(m, r, k);
    const double eps = result.epsilon;
    v.bound_rhs = (1.0 - static_cast<double>(k) * eps) * factor * target_sq;
    v.ratio = v.sigma_min_sq / target_sq;
    v.root = root_node_decision_root(expected::FamilyParams::make(m, r, k));

    v.value_consistent = std::abs(result.sigma_min_sq - v.sigma_min_sq) <=
                         kCertificateSlack * std::max(1.0, v.sigma_min_sq);
    if (!v.value_consistent) v.failures.push_back("reported sigma_min_sq does not match the subset");
    v.bound_holds = v.sigma_min_sq >= v.bound_rhs - kCertificateSlack;
    if (!v.bound_holds) v.failures.push_back("sigma_min(A_S)^2 below (1 - k eps) * main_bound * sigma_min(A)^2");
    v.root_holds = v.ratio >= v.root - kCertificateSlack;
    if (!v.root_holds) v.failures.push_back("sigma_min(A_S)^2 / sigma_min(A)^2 below the root of f_empty");
    if (!(eps > 0.0 && eps < 1.0 / static_cast<double>(k))) {
        v.bound_holds = false;
        v.failures.push_back("epsilon outside (0, 1/k)");
    }
    return v;
}

} // namespace subsel::selector
