#pragma once

#include <cmath>
#include <memory>

#include "sl2a/layers/layer.hpp"

namespace sl2a {

/// Per-row standardisation across features followed by a learnable affine
/// map: y = gain * (x - mean) / sqrt(var + eps) + shift, with the biased
/// variance and eps = 1e-5.
class LayerNorm final : public Layer {
public:
    static constexpr double kEpsilon = 1e-5;

    explicit LayerNorm(std::size_t width)
    {
        if (width == 0) throw ConfigError("LayerNorm: zero width");
        params_.emplace_back("gain", Matrix(1, width, 1.0));
        params_.emplace_back("shift", Matrix(1, width, 0.0));
    }

    LayerKind kind() const override { return LayerKind::layernorm; }
    std::size_t input_width() const override { return param(0).value.cols(); }
    std::size_t output_width() const override { return input_width(); }

    Matrix& gain() { return param(0).value; }
    Matrix& shift() { return param(1).value; }
    const Matrix& gain() const { return param(0).value; }
    const Matrix& shift() const { return param(1).value; }

    Matrix forward(const Matrix& x) override
    {
        check_input(x, "LayerNorm");
        const std::size_t n = x.rows();
        const std::size_t w = x.cols();
        normalized_ = Matrix(n, w);
        inv_std_.assign(n, 0.0);
        Matrix y(n, w);
        const auto g = gain().data();
        const auto s = shift().data();
        for (std::size_t r = 0; r < n; ++r) {
            const auto in = x.row(r);
            double mean = 0.0;
            for (double v : in) mean += v;
            mean /= static_cast<double>(w);
            double var = 0.0;
            for (double v : in) var += (v - mean) * (v - mean);
            var /= static_cast<double>(w);
            const double inv = 1.0 / std::sqrt(var + kEpsilon);
            inv_std_[r] = inv;
            auto xh = normalized_.row(r);
            auto out = y.row(r);
            for (std::size_t c = 0; c < w; ++c) {
                xh[c] = (in[c] - mean) * inv;
                out[c] = g[c] * xh[c] + s[c];
            }
        }
        cached_ = true;
        return y;
    }

    using Layer::backward;
    Matrix backward(const Matrix& grad_out, bool need_input_grad) override
    {
        require_cache("LayerNorm");
        check_grad(grad_out, normalized_.rows(), "LayerNorm");
        const std::size_t n = grad_out.rows();
        const std::size_t w = grad_out.cols();
        auto gg = param(0).grad.data();
        auto gs = param(1).grad.data();
        const auto g = gain().data();
        Matrix gx = need_input_grad ? Matrix(n, w) : Matrix();
        for (std::size_t r = 0; r < n; ++r) {
            const auto go = grad_out.row(r);
            const auto xh = normalized_.row(r);
            double sum_dxh = 0.0;
            double sum_dxh_xh = 0.0;
            for (std::size_t c = 0; c < w; ++c) {
                gg[c] += go[c] * xh[c];
                gs[c] += go[c];
                const double dxh = go[c] * g[c];
                sum_dxh += dxh;
                sum_dxh_xh += dxh * xh[c];
            }
            if (!need_input_grad) continue;
            auto out = gx.row(r);
            const double inv_w = 1.0 / static_cast<double>(w);
            for (std::size_t c = 0; c < w; ++c) {
                const double dxh = go[c] * g[c];
                out[c] = inv_std_[r] * (dxh - inv_w * sum_dxh - xh[c] * inv_w * sum_dxh_xh);
            }
        }
        clear_cache();
        return gx;
    }

    void clear_cache() override
    {
        cached_ = false;
        normalized_ = Matrix();
        inv_std_.clear();
    }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<LayerNorm>(*this); }

private:
    Matrix normalized_;
    std::vector<double> inv_std_;
};

}  // namespace sl2a
