#pragma once

#include <cmath>
#include <cstddef>
#include <type_traits>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "subsel/error.hpp"

namespace subsel {

using Rational = mpq_class;

template <class T>
inline constexpr bool is_rational_v = std::is_same_v<T, Rational>;

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.get_d(); }

inline bool is_exact_zero(double v) { return v == 0.0; }
inline bool is_exact_zero(const Rational& v) { return sgn(v) == 0; }

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const Rational& v) { return std::abs(v.get_d()); }

/// Minimal row-major dense matrix shared by the exact and floating-point
/// code paths. Floating-point factorizations go through Eigen instead.
template <class T>
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> row_major)
        : rows_(rows), cols_(cols), data_(std::move(row_major)) {
        if (data_.size() != rows_ * cols_) {
            throw InputError("DenseMatrix: data size does not match shape");
        }
    }

    static DenseMatrix identity(std::size_t n) {
        DenseMatrix out(n, n);
        for (std::size_t i = 0; i < n; ++i) out(i, i) = T(1);
        return out;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<T>& data() const { return data_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    DenseMatrix transpose() const {
        DenseMatrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        return out;
    }

    friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
        if (a.cols_ != b.rows_) throw InputError("DenseMatrix: shape mismatch in product");
        DenseMatrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t l = 0; l < a.cols_; ++l) {
                const T& ail = a(i, l);
                if (is_exact_zero(ail)) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += ail * b(l, j);
            }
        return out;
    }

    friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw InputError("DenseMatrix: shape mismatch in sum");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] += b.data_[i];
        return a;
    }

    friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw InputError("DenseMatrix: shape mismatch in difference");
        for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
        return a;
    }

    friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// Largest absolute entry, in double precision.
    double max_abs() const {
        double out = 0.0;
        for (const T& v : data_) out = std::max(out, magnitude(v));
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Exact inverse by Gauss-Jordan elimination over the rationals.
/// Throws NumericError when the matrix is singular.
DenseMatrix<Rational> inverse(const DenseMatrix<Rational>& a);

DenseMatrix<double> to_double(const DenseMatrix<Rational>& a);

} // namespace subsel
