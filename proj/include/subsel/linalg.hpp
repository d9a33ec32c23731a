#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "subsel/dense.hpp"

namespace subsel::linalg {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kDefaultRankTolerance = 1e-10;

/// Strictly increasing list of column indices into an m-column matrix.
class SubsetIndex {
public:
    SubsetIndex() = default;

    /// Sorts and validates; throws InputError on duplicates or out-of-range entries.
    static SubsetIndex from(std::vector<std::size_t> indices, std::size_t column_count);

    /// All indices 0..count-1.
    static SubsetIndex full(std::size_t count);

    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    bool contains(std::size_t j) const;
    std::span<const std::size_t> indices() const { return indices_; }
    std::size_t operator[](std::size_t i) const { return indices_[i]; }

    /// Copy with one more index; throws if already present.
    SubsetIndex with(std::size_t j, std::size_t column_count) const;

    friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;
    friend auto operator<=>(const SubsetIndex&, const SubsetIndex&) = default;

private:
    explicit SubsetIndex(std::vector<std::size_t> sorted) : indices_(std::move(sorted)) {}
    std::vector<std::size_t> indices_;
};

/// Dense real n x m input matrix with its detected numerical rank.
class TargetMatrix {
public:
    /// Builds from row-major entries. Throws InputError on shape mismatch or
    /// non-finite entries.
    static TargetMatrix from_row_major(std::size_t rows, std::size_t cols,
                                       std::span<const double> entries,
                                       double rank_tolerance = kDefaultRankTolerance);
    static TargetMatrix from_matrix(RowMatrix entries,
                                    double rank_tolerance = kDefaultRankTolerance);

    std::size_t rows() const { return static_cast<std::size_t>(entries_.rows()); }
    std::size_t cols() const { return static_cast<std::size_t>(entries_.cols()); }
    std::size_t rank() const { return rank_; }
    double rank_tolerance() const { return rank_tolerance_; }
    const RowMatrix& entries() const { return entries_; }

    /// Singular values, descending, length min(n, m).
    const Eigen::VectorXd& singular_values() const { return singular_values_; }

    /// Smallest nonzero singular value (the rank-th one); 0 for the zero matrix.
    double sigma_min() const;

    RowMatrix columns(const SubsetIndex& subset) const;

private:
    TargetMatrix(RowMatrix entries, double tol);

    RowMatrix entries_;
    Eigen::VectorXd singular_values_;
    std::size_t rank_ = 0;
    double rank_tolerance_ = kDefaultRankTolerance;
};

enum class FrameOrigin { ExactConstruction, SvdOfTarget, RandomOrthonormalization };

struct SvdFactors {
    Eigen::MatrixXd u;      ///< n x r, orthonormal columns
    Eigen::VectorXd sigma;  ///< r positive values, descending
};

/// Y in R^{dim x count} with Y Y^T = I_dim. Columns are the frame vectors.
template <class T>
struct Frame {
    DenseMatrix<T> columns;
    T gram_residual = T(0);
    FrameOrigin origin = FrameOrigin::ExactConstruction;
    std::optional<SvdFactors> svd_factors;

    std::size_t dim() const { return columns.rows(); }
    std::size_t count() const { return columns.cols(); }
    const T& at(std::size_t i, std::size_t j) const { return columns(i, j); }
};

using IsotropicFrame = Frame<double>;
using RationalFrame = Frame<Rational>;

/// max |(Y Y^T - I)_{ij}| in the frame's own arithmetic.
template <class T>
T gram_residual(const DenseMatrix<T>& y) {
    const auto gram = y * y.transpose();
    T worst(0);
    for (std::size_t i = 0; i < gram.rows(); ++i)
        for (std::size_t j = 0; j < gram.cols(); ++j) {
            T dev = gram(i, j) - (i == j ? T(1) : T(0));
            if (dev < 0) dev = -dev;
            if (dev > worst) worst = dev;
        }
    return worst;
}

/// Sum over chosen columns of y_j y_j^T (dim x dim).
template <class T>
DenseMatrix<T> subset_gram(const Frame<T>& frame, std::span<const std::size_t> subset) {
    const std::size_t n = frame.dim();
    DenseMatrix<T> out(n, n);
    for (std::size_t j : subset)
        for (std::size_t a = 0; a < n; ++a) {
            const T& ya = frame.at(a, j);
            if (is_exact_zero(ya)) continue;
            for (std::size_t b = 0; b < n; ++b) out(a, b) += ya * frame.at(b, j);
        }
    return out;
}

struct ThinSvd {
    Eigen::MatrixXd u;      ///< n x r
    Eigen::VectorXd sigma;  ///< r descending positive values
    IsotropicFrame frame;   ///< r x m, origin SvdOfTarget, carries the factors
};

/// A = U diag(sigma) Y with Y Y^T = I_r, r = A.rank().
/// Throws InputError("zero matrix has no frame") when A == 0.
ThinSvd thin_svd(const TargetMatrix& a);

/// j-th largest singular value (1-based) of an arbitrary dense block, by the
/// symmetric eigenvalue route on the smaller of B^T B and B B^T.
double singular_value(const Eigen::MatrixXd& block, std::size_t j);

/// min(k, n)-th largest singular value of A_S.
double sigma_min_sub(const TargetMatrix& a, const SubsetIndex& subset);

/// Same, but with the row count replaced by an effective rank r, i.e. the
/// min(k, r)-th largest singular value. Used for rank-deficient targets.
double sigma_min_sub(const TargetMatrix& a, const SubsetIndex& subset, std::size_t effective_rank);

/// Same quantity for a frame.
double sigma_min_sub(const IsotropicFrame& frame, const SubsetIndex& subset);

/// First `dim` rows of the Cayley transform (I - S)(I + S)^{-1} of a rational
/// skew-symmetric S. Exactly isotropic.
RationalFrame rational_isotropic_frame(const DenseMatrix<Rational>& skew, std::size_t dim);

/// Random rational skew-symmetric matrix with entries p/denominator, |p| <= max_numerator.
DenseMatrix<Rational> random_rational_skew(std::size_t m, long max_numerator, long denominator,
                                           std::uint64_t seed);

/// Orthonormalized Gaussian rows; deterministic for a fixed seed.
IsotropicFrame random_isotropic_frame(std::size_t n, std::size_t m, std::uint64_t seed);

/// Gaussian n x m target matrix; deterministic for a fixed seed.
TargetMatrix random_gaussian_matrix(std::size_t n, std::size_t m, std::uint64_t seed);

IsotropicFrame to_float_frame(const RationalFrame& frame);

Eigen::MatrixXd to_eigen(const DenseMatrix<double>& a);
DenseMatrix<double> from_eigen(const Eigen::MatrixXd& a);

} // namespace subsel::linalg
