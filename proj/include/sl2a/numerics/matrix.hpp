#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sl2a/numerics/errors.hpp"

namespace sl2a {

/// Dense row-major matrix of doubles. Rows are samples, columns are features.
///
/// Storage is aligned to Eigen's maximum alignment so that vectorized kernels
/// split every buffer the same way regardless of where it was allocated, which
/// keeps results bit-identical between runs.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(data.begin(), data.end())
    {
        if (data_.size() != rows_ * cols_) {
            throw ShapeError("Matrix: data length " + std::to_string(data_.size()) +
                             " does not match " + std::to_string(rows_) + "x" +
                             std::to_string(cols_));
        }
        require_finite("Matrix");
    }

    /// Row-wise literal, e.g. Matrix::from_rows({{1, 2}, {3, 4}}).
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows)
    {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        std::vector<double> data;
        data.reserve(r * c);
        for (const auto& row : rows) {
            if (row.size() != c) throw ShapeError("Matrix::from_rows: ragged rows");
            data.insert(data.end(), row.begin(), row.end());
        }
        return Matrix(r, c, std::move(data));
    }

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

    bool same_shape(const Matrix& o) const noexcept { return rows_ == o.rows_ && cols_ == o.cols_; }

    bool all_finite() const noexcept
    {
        // NaN and Inf are exactly the values with an all-ones exponent.
        constexpr std::uint64_t exponent = 0x7FF0000000000000ULL;
        std::uint64_t bad = 0;
        for (double v : data_) bad |= static_cast<std::uint64_t>((std::bit_cast<std::uint64_t>(v) & exponent) == exponent);
        return bad == 0;
    }

    /// Throws NumericalError naming `where` if any entry is NaN or Inf.
    void require_finite(const char* where) const
    {
        if (!all_finite()) throw NumericalError(std::string(where) + ": non-finite value");
    }

    std::string shape_str() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    friend bool operator==(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double, Eigen::aligned_allocator<double>> data_;
};

namespace detail {

using EigenRowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const EigenRowMajor, Eigen::AlignedMax>;
using MutMap = Eigen::Map<EigenRowMajor, Eigen::AlignedMax>;

inline ConstMap view(const Matrix& m)
{
    return ConstMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                    static_cast<Eigen::Index>(m.cols()));
}

inline MutMap view(Matrix& m)
{
    return MutMap(m.data().data(), static_cast<Eigen::Index>(m.rows()),
                  static_cast<Eigen::Index>(m.cols()));
}

}  // namespace detail

/// a * b
inline Matrix matmul(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.rows())
        throw ShapeError("matmul: " + a.shape_str() + " * " + b.shape_str());
    Matrix out(a.rows(), b.cols());
    if (a.cols() > 0) detail::view(out).noalias() = detail::view(a) * detail::view(b);
    out.require_finite("matmul");
    return out;
}

/// a * b^T
inline Matrix matmul_nt(const Matrix& a, const Matrix& b)
{
    if (a.cols() != b.cols())
        throw ShapeError("matmul_nt: " + a.shape_str() + " * (" + b.shape_str() + ")^T");
    Matrix out(a.rows(), b.rows());
    if (a.cols() > 0) detail::view(out).noalias() = detail::view(a) * detail::view(b).transpose();
    out.require_finite("matmul_nt");
    return out;
}

/// a^T * b
inline Matrix matmul_tn(const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows())
        throw ShapeError("matmul_tn: (" + a.shape_str() + ")^T * " + b.shape_str());
    Matrix out(a.cols(), b.cols());
    if (a.rows() > 0) detail::view(out).noalias() = detail::view(a).transpose() * detail::view(b);
    out.require_finite("matmul_tn");
    return out;
}

/// acc += a^T * b. Used for parameter-gradient accumulation.
inline void add_matmul_tn(Matrix& acc, const Matrix& a, const Matrix& b)
{
    if (a.rows() != b.rows() || acc.rows() != a.cols() || acc.cols() != b.cols())
        throw ShapeError("add_matmul_tn: shape mismatch");
    if (a.rows() > 0) detail::view(acc).noalias() += detail::view(a).transpose() * detail::view(b);
    acc.require_finite("add_matmul_tn");
}

/// Adds the (1, cols) row vector `bias` to every row of `a`.
inline void add_row_vector(Matrix& a, const Matrix& bias)
{
    if (bias.rows() != 1 || bias.cols() != a.cols()) throw ShapeError("add_row_vector: shape mismatch");
    detail::view(a).rowwise() += detail::view(bias).row(0);
}

/// acc (1, cols) += column sums of `a`.
inline void add_column_sums(Matrix& acc, const Matrix& a)
{
    if (acc.rows() != 1 || acc.cols() != a.cols()) throw ShapeError("add_column_sums: shape mismatch");
    detail::view(acc).row(0) += detail::view(a).colwise().sum();
}

inline Matrix transpose(const Matrix& a)
{
    Matrix out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
    return out;
}

inline Matrix hadamard(const Matrix& a, const Matrix& b)
{
    if (!a.same_shape(b)) throw ShapeError("hadamard: " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows(), a.cols());
    detail::view(out).array() = detail::view(a).array() * detail::view(b).array();
    out.require_finite("hadamard");
    return out;
}

inline Matrix add(const Matrix& a, const Matrix& b)
{
    if (!a.same_shape(b)) throw ShapeError("add: " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows(), a.cols());
    detail::view(out).array() = detail::view(a).array() + detail::view(b).array();
    out.require_finite("add");
    return out;
}

inline Matrix subtract(const Matrix& a, const Matrix& b)
{
    if (!a.same_shape(b)) throw ShapeError("subtract: " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows(), a.cols());
    detail::view(out).array() = detail::view(a).array() - detail::view(b).array();
    out.require_finite("subtract");
    return out;
}

inline Matrix scale(const Matrix& a, double s)
{
    Matrix out(a.rows(), a.cols());
    detail::view(out).array() = detail::view(a).array() * s;
    out.require_finite("scale");
    return out;
}

/// In-place acc += b.
inline void accumulate(Matrix& acc, const Matrix& b)
{
    if (!acc.same_shape(b)) throw ShapeError("accumulate: " + acc.shape_str() + " vs " + b.shape_str());
    detail::view(acc).array() += detail::view(b).array();
}

/// Gather rows by index.
inline Matrix take_rows(const Matrix& a, std::span<const std::size_t> idx)
{
    Matrix out(idx.size(), a.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= a.rows()) throw ShapeError("take_rows: index out of range");
        std::copy_n(a.row(idx[i]).begin(), a.cols(), out.row(i).begin());
    }
    return out;
}

inline Matrix row_slice(const Matrix& a, std::size_t begin, std::size_t end)
{
    if (begin > end || end > a.rows()) throw ShapeError("row_slice: bad range");
    Matrix out(end - begin, a.cols());
    std::copy(a.data().begin() + static_cast<std::ptrdiff_t>(begin * a.cols()),
              a.data().begin() + static_cast<std::ptrdiff_t>(end * a.cols()), out.data().begin());
    return out;
}

inline double sum_squares(const Matrix& a)
{
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return s;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b)
{
    if (!a.same_shape(b)) throw ShapeError("max_abs_diff: shape mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

}  // namespace sl2a
