#pragma once

#include "sl2a/numerics/matrix.hpp"

namespace sl2a {

struct LossResult {
    double value = 0.0;
    Matrix grad;  ///< dL/dpred
};

/// (1/N) sum_i ||pred_i - target_i||^2 over N rows, summed across columns.
inline LossResult mse_loss(const Matrix& pred, const Matrix& target)
{
    if (!pred.same_shape(target)) throw ShapeError("mse_loss: " + pred.shape_str() + " vs " + target.shape_str());
    if (pred.rows() == 0) throw ShapeError("mse_loss: no samples");
    const double inv_n = 1.0 / static_cast<double>(pred.rows());
    LossResult r{0.0, Matrix(pred.rows(), pred.cols())};
    auto g = r.grad.data();
    const auto p = pred.data();
    const auto t = target.data();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double d = p[i] - t[i];
        r.value += d * d;
        g[i] = 2.0 * d * inv_n;
    }
    r.value *= inv_n;
    return r;
}

}  // namespace sl2a
