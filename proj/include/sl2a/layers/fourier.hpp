#pragma once

#include <cmath>
#include <memory>
#include <numbers>

#include "sl2a/layers/layer.hpp"

namespace sl2a {

struct FourierEncodingSpec {
    std::size_t num_frequencies = 10;
    double base = 2.0;
    bool include_input = true;

    std::size_t output_width(std::size_t input_dim) const
    {
        return input_dim * 2 * num_frequencies + (include_input ? input_dim : 0);
    }
};

/// Sinusoidal positional encoding. Column layout per row:
/// [x_0..x_{n-1} if include_input] then, for each input dimension i and each
/// k = 0..F-1, the pair sin(base^k pi x_i), cos(base^k pi x_i).
class FourierEncoding final : public Layer {
public:
    FourierEncoding(FourierEncodingSpec spec, std::size_t input_dim) : spec_(spec), input_dim_(input_dim)
    {
        if (input_dim == 0) throw ConfigError("FourierEncoding: zero input dimension");
        if (spec.base <= 0.0) throw ConfigError("FourierEncoding: base must be positive");
        for (std::size_t k = 0; k < spec.num_frequencies; ++k)
            freqs_.push_back(std::pow(spec.base, static_cast<double>(k)) * std::numbers::pi);
    }

    LayerKind kind() const override { return LayerKind::fourier; }
    std::size_t input_width() const override { return input_dim_; }
    std::size_t output_width() const override { return spec_.output_width(input_dim_); }
    const FourierEncodingSpec& spec() const { return spec_; }

    Matrix forward(const Matrix& x) override
    {
        check_input(x, "FourierEncoding");
        Matrix y(x.rows(), output_width());
        const std::size_t offset = spec_.include_input ? input_dim_ : 0;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const auto in = x.row(r);
            auto out = y.row(r);
            for (std::size_t i = 0; i < input_dim_; ++i) {
                if (spec_.include_input) out[i] = in[i];
                for (std::size_t k = 0; k < freqs_.size(); ++k) {
                    const std::size_t col = offset + 2 * (i * freqs_.size() + k);
                    out[col] = std::sin(freqs_[k] * in[i]);
                    out[col + 1] = std::cos(freqs_[k] * in[i]);
                }
            }
        }
        input_ = x;
        cached_ = true;
        return y;
    }

    using Layer::backward;
    Matrix backward(const Matrix& grad_out, bool need_input_grad) override
    {
        require_cache("FourierEncoding");
        check_grad(grad_out, input_.rows(), "FourierEncoding");
        Matrix gx;
        if (need_input_grad) {
            gx = Matrix(input_.rows(), input_dim_);
            const std::size_t offset = spec_.include_input ? input_dim_ : 0;
            for (std::size_t r = 0; r < input_.rows(); ++r) {
                const auto in = input_.row(r);
                const auto go = grad_out.row(r);
                auto out = gx.row(r);
                for (std::size_t i = 0; i < input_dim_; ++i) {
                    double acc = spec_.include_input ? go[i] : 0.0;
                    for (std::size_t k = 0; k < freqs_.size(); ++k) {
                        const std::size_t col = offset + 2 * (i * freqs_.size() + k);
                        const double w = freqs_[k];
                        acc += go[col] * w * std::cos(w * in[i]) - go[col + 1] * w * std::sin(w * in[i]);
                    }
                    out[i] = acc;
                }
            }
        }
        clear_cache();
        return gx;
    }

    void clear_cache() override
    {
        cached_ = false;
        input_ = Matrix();
    }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<FourierEncoding>(*this); }

private:
    FourierEncodingSpec spec_;
    std::size_t input_dim_;
    std::vector<double> freqs_;
    Matrix input_;
};

/// Stateless convenience wrapper.
inline Matrix fourier_encode(const FourierEncodingSpec& spec, const Matrix& x)
{
    FourierEncoding enc(spec, x.cols());
    return enc.forward(x);
}

}  // namespace sl2a
