#pragma once

#include <cstdint>

#include "sl2a/numerics/matrix.hpp"
#include "sl2a/numerics/rng.hpp"

namespace sl2a::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double lo = -1.0, double hi = 1.0)
{
    Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.uniform(lo, hi);
    return m;
}

/// Random shape with each side in [1, max_side].
inline std::pair<std::size_t, std::size_t> random_shape(Rng& rng, std::size_t max_side)
{
    return {1 + rng.below(max_side), 1 + rng.below(max_side)};
}

inline Matrix naive_matmul(const Matrix& a, const Matrix& b)
{
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

}  // namespace sl2a::testing
