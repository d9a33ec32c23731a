#include "subsel/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace subsel {

DenseMatrix<Rational> inverse(const DenseMatrix<Rational>& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw InputError("inverse: matrix is not square");
    DenseMatrix<Rational> work = a;
    auto inv = DenseMatrix<Rational>::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && sgn(work(pivot, col)) == 0) ++pivot;
        if (pivot == n) throw NumericError("inverse: matrix is singular");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(work(pivot, j), work(col, j));
                std::swap(inv(pivot, j), inv(col, j));
            }
        }
        const Rational scale = 1 / work(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            work(col, j) *= scale;
            inv(col, j) *= scale;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || sgn(work(i, col)) == 0) continue;
            const Rational factor = work(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                work(i, j) -= factor * work(col, j);
                inv(i, j) -= factor * inv(col, j);
            }
        }
    }
    return inv;
}

DenseMatrix<double> to_double(const DenseMatrix<Rational>& a) {
    DenseMatrix<double> out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).get_d();
    return out;
}

} // namespace subsel

namespace subsel::linalg {

SubsetIndex SubsetIndex::from(std::vector<std::size_t> indices, std::size_t column_count) {
    std::sort(indices.begin(), indices.end());
    if (std::adjacent_find(indices.begin(), indices.end()) != indices.end())
        throw InputError("subset has duplicate indices");
    if (!indices.empty() && indices.back() >= column_count)
        throw InputError("subset index " + std::to_string(indices.back()) +
                         " out of range for " + std::to_string(column_count) + " columns");
    return SubsetIndex(std::move(indices));
}

SubsetIndex SubsetIndex::full(std::size_t count) {
    std::vector<std::size_t> all(count);
    for (std::size_t i = 0; i < count; ++i) all[i] = i;
    return SubsetIndex(std::move(all));
}

bool SubsetIndex::contains(std::size_t j) const {
    return std::binary_search(indices_.begin(), indices_.end(), j);
}

SubsetIndex SubsetIndex::with(std::size_t j, std::size_t column_count) const {
    if (contains(j)) throw InputError("index " + std::to_string(j) + " already chosen");
    auto next = indices_;
    next.push_back(j);
    return from(std::move(next), column_count);
}

TargetMatrix::TargetMatrix(RowMatrix entries, double tol)
    : entries_(std::move(entries)), rank_tolerance_(tol) {
    if (entries_.rows() == 0 || entries_.cols() == 0) throw InputError("target matrix is empty");
    if (!entries_.allFinite()) throw InputError("target matrix has non-finite entries");
    if (!(tol > 0.0)) throw InputError("rank tolerance must be positive");
    const Eigen::MatrixXd dense = entries_;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(dense);
    singular_values_ = svd.singularValues();
    const double top = singular_values_.size() > 0 ? singular_values_(0) : 0.0;
    rank_ = 0;
    if (top > 0.0) {
        for (Eigen::Index i = 0; i < singular_values_.size(); ++i)
            if (singular_values_(i) > tol * top) ++rank_;
    }
}

TargetMatrix TargetMatrix::from_row_major(std::size_t rows, std::size_t cols,
                                          std::span<const double> entries, double rank_tolerance) {
    if (entries.size() != rows * cols)
        throw InputError("expected " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(entries.size()));
    RowMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    std::copy(entries.begin(), entries.end(), m.data());
    return TargetMatrix(std::move(m), rank_tolerance);
}

TargetMatrix TargetMatrix::from_matrix(RowMatrix entries, double rank_tolerance) {
    return TargetMatrix(std::move(entries), rank_tolerance);
}

double TargetMatrix::sigma_min() const {
    return rank_ == 0 ? 0.0 : singular_values_(static_cast<Eigen::Index>(rank_ - 1));
}

RowMatrix TargetMatrix::columns(const SubsetIndex& subset) const {
    RowMatrix out(entries_.rows(), static_cast<Eigen::Index>(subset.size()));
    for (std::size_t c = 0; c < subset.size(); ++c)
        out.col(static_cast<Eigen::Index>(c)) = entries_.col(static_cast<Eigen::Index>(subset[c]));
    return out;
}

Eigen::MatrixXd to_eigen(const DenseMatrix<double>& a) {
    Eigen::MatrixXd out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return out;
}

DenseMatrix<double> from_eigen(const Eigen::MatrixXd& a) {
    DenseMatrix<double> out(static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(a.cols()));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = a(i, j);
    return out;
}

ThinSvd thin_svd(const TargetMatrix& a) {
    if (a.rank() == 0) throw InputError("zero matrix has no frame");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(a.entries()),
                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto r = static_cast<Eigen::Index>(a.rank());
    ThinSvd out;
    out.u = svd.matrixU().leftCols(r);
    out.sigma = svd.singularValues().head(r);
    const Eigen::MatrixXd y = svd.matrixV().leftCols(r).transpose();
    out.frame.columns = from_eigen(y);
    out.frame.gram_residual = gram_residual(out.frame.columns);
    out.frame.origin = FrameOrigin::SvdOfTarget;
    out.frame.svd_factors = SvdFactors{out.u, out.sigma};
    return out;
}

double singular_value(const Eigen::MatrixXd& block, std::size_t j) {
    const auto rows = block.rows();
    const auto cols = block.cols();
    const auto small = std::min(rows, cols);
    if (j == 0 || static_cast<Eigen::Index>(j) > small)
        throw InputError("singular value index out of range");
    const Eigen::MatrixXd gram =
        cols <= rows ? Eigen::MatrixXd(block.transpose() * block) : Eigen::MatrixXd(block * block.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double lambda = eig.eigenvalues()(gram.rows() - static_cast<Eigen::Index>(j));
    return std::sqrt(std::max(0.0, lambda));
}

double sigma_min_sub(const TargetMatrix& a, const SubsetIndex& subset) {
    return sigma_min_sub(a, subset, a.rows());
}

double sigma_min_sub(const TargetMatrix& a, const SubsetIndex& subset, std::size_t effective_rank) {
    if (subset.empty()) throw InputError("empty subset");
    if (!subset.empty() && subset[subset.size() - 1] >= a.cols())
        throw InputError("subset out of range");
    const std::size_t j = std::min(subset.size(), effective_rank);
    if (j == 0) return 0.0;
    return singular_value(a.columns(subset), j);
}

double sigma_min_sub(const IsotropicFrame& frame, const SubsetIndex& subset) {
    if (subset.empty()) throw InputError("empty subset");
    Eigen::MatrixXd block(frame.dim(), subset.size());
    for (std::size_t c = 0; c < subset.size(); ++c)
        for (std::size_t i = 0; i < frame.dim(); ++i)
            block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = frame.at(i, subset[c]);
    return singular_value(block, std::min(subset.size(), frame.dim()));
}

RationalFrame rational_isotropic_frame(const DenseMatrix<Rational>& skew, std::size_t dim) {
    const std::size_t m = skew.rows();
    if (skew.cols() != m) throw InputError("skew matrix is not square");
    if (dim == 0 || dim > m) throw InputError("frame dimension must be in [1, m]");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (skew(i, j) != -skew(j, i)) throw InputError("matrix is not skew-symmetric");
    const auto id = DenseMatrix<Rational>::identity(m);
    const auto q = (id - skew) * inverse(id + skew);
    RationalFrame out;
    out.columns = DenseMatrix<Rational>(dim, m);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < m; ++j) out.columns(i, j) = q(i, j);
    out.gram_residual = gram_residual(out.columns);
    out.origin = FrameOrigin::ExactConstruction;
    return out;
}

DenseMatrix<Rational> random_rational_skew(std::size_t m, long max_numerator, long denominator,
                                           std::uint64_t seed) {
    if (denominator <= 0) throw InputError("denominator must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> numer(-max_numerator, max_numerator);
    DenseMatrix<Rational> s(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            Rational v(numer(rng), denominator);
            v.canonicalize();
            s(i, j) = v;
            s(j, i) = -v;
        }
    return s;
}

IsotropicFrame random_isotropic_frame(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n == 0) throw InputError("frame dimension must be positive");
    if (n > m) throw InputError("frame dimension exceeds column count");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd g(m, n);
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = normal(rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);
    // One re-orthogonalization pass.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr2(q);
    Eigen::MatrixXd q2 = qr2.householderQ() * Eigen::MatrixXd::Identity(m, n);
    IsotropicFrame out;
    out.columns = from_eigen(q2.transpose());
    out.gram_residual = gram_residual(out.columns);
    out.origin = FrameOrigin::RandomOrthonormalization;
    return out;
}

TargetMatrix random_gaussian_matrix(std::size_t n, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    RowMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = normal(rng);
    return TargetMatrix::from_matrix(std::move(a));
}

IsotropicFrame to_float_frame(const RationalFrame& frame) {
    IsotropicFrame out;
    out.columns = to_double(frame.columns);
    out.gram_residual = gram_residual(out.columns);
    out.origin = frame.origin;
    return out;
}

} // namespace subsel::linalg
