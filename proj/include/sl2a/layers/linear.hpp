#pragma once

#include <cmath>
#include <memory>

#include "sl2a/layers/layer.hpp"
#include "sl2a/numerics/rng.hpp"

namespace sl2a {

/// Fan-in scaled uniform bound, 1/sqrt(fan_in).
inline double fan_in_bound(std::size_t fan_in) { return 1.0 / std::sqrt(static_cast<double>(fan_in)); }

/// y = x W^T + b, W shaped (out, in).
class Linear final : public Layer {
public:
    Linear(std::size_t in, std::size_t out)
    {
        if (in == 0 || out == 0) throw ConfigError("Linear: zero width");
        params_.emplace_back("weight", Matrix(out, in));
        params_.emplace_back("bias", Matrix(1, out));
    }

    /// Uniform(-1/sqrt(in), 1/sqrt(in)) for both weight and bias.
    Linear(std::size_t in, std::size_t out, Rng& rng) : Linear(in, out)
    {
        const double bound = fan_in_bound(in);
        init_uniform(rng, bound, bound);
    }

    void init_uniform(Rng& rng, double weight_bound, double bias_bound)
    {
        for (double& v : weight().data()) v = rng.uniform(-weight_bound, weight_bound);
        for (double& v : bias().data()) v = rng.uniform(-bias_bound, bias_bound);
    }

    LayerKind kind() const override { return LayerKind::linear; }
    std::size_t input_width() const override { return param(0).value.cols(); }
    std::size_t output_width() const override { return param(0).value.rows(); }

    Matrix& weight() { return param(0).value; }
    Matrix& bias() { return param(1).value; }
    const Matrix& weight() const { return param(0).value; }
    const Matrix& bias() const { return param(1).value; }

    Matrix forward(const Matrix& x) override
    {
        check_input(x, "Linear");
        Matrix y = matmul_nt(x, weight());
        add_row_vector(y, bias());
        input_ = x;
        cached_ = true;
        return y;
    }

    using Layer::backward;
    Matrix backward(const Matrix& grad_out, bool need_input_grad) override
    {
        require_cache("Linear");
        check_grad(grad_out, input_.rows(), "Linear");
        add_matmul_tn(param(0).grad, grad_out, input_);
        add_column_sums(param(1).grad, grad_out);
        Matrix gx = need_input_grad ? matmul(grad_out, weight()) : Matrix();
        clear_cache();
        return gx;
    }

    void clear_cache() override
    {
        cached_ = false;
        input_ = Matrix();
    }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<Linear>(*this); }

private:
    Matrix input_;
};

/// y = x (U V)^T + b evaluated as two thin products; U is (out, r), V is (r, in).
class LowRankLinear final : public Layer {
public:
    /// `allow_overcomplete` permits r > min(in, out), which a factorised
    /// head (e.g. 256 -> 3 at rank 32) needs.
    LowRankLinear(std::size_t in, std::size_t out, std::size_t rank, bool allow_overcomplete = false)
    {
        if (in == 0 || out == 0 || rank == 0) throw ConfigError("LowRankLinear: zero width or rank");
        if (!allow_overcomplete && rank > std::min(in, out))
            throw ConfigError("LowRankLinear: rank " + std::to_string(rank) + " exceeds min(" +
                              std::to_string(in) + ", " + std::to_string(out) + ")");
        params_.emplace_back("u", Matrix(out, rank));
        params_.emplace_back("v", Matrix(rank, in));
        params_.emplace_back("bias", Matrix(1, out));
    }

    /// V ~ U(+-1/sqrt(in)), U ~ U(+-1/sqrt(r)), bias ~ U(+-1/sqrt(in)): the
    /// default init of the two stacked linear maps it replaces.
    LowRankLinear(std::size_t in, std::size_t out, std::size_t rank, Rng& rng, bool allow_overcomplete = false)
        : LowRankLinear(in, out, rank, allow_overcomplete)
    {
        for (double& v : v_factor().data()) v = rng.uniform(-fan_in_bound(in), fan_in_bound(in));
        for (double& v : u_factor().data()) v = rng.uniform(-fan_in_bound(rank), fan_in_bound(rank));
        for (double& v : bias().data()) v = rng.uniform(-fan_in_bound(in), fan_in_bound(in));
    }

    LayerKind kind() const override { return LayerKind::lowrank_linear; }
    std::size_t input_width() const override { return param(1).value.cols(); }
    std::size_t output_width() const override { return param(0).value.rows(); }
    std::size_t rank() const { return param(0).value.cols(); }

    Matrix& u_factor() { return param(0).value; }
    Matrix& v_factor() { return param(1).value; }
    Matrix& bias() { return param(2).value; }
    const Matrix& u_factor() const { return param(0).value; }
    const Matrix& v_factor() const { return param(1).value; }
    const Matrix& bias() const { return param(2).value; }

    Matrix forward(const Matrix& x) override
    {
        check_input(x, "LowRankLinear");
        input_ = x;
        hidden_ = matmul_nt(x, v_factor());
        Matrix y = matmul_nt(hidden_, u_factor());
        add_row_vector(y, bias());
        cached_ = true;
        return y;
    }

    using Layer::backward;
    Matrix backward(const Matrix& grad_out, bool need_input_grad) override
    {
        require_cache("LowRankLinear");
        check_grad(grad_out, input_.rows(), "LowRankLinear");
        add_matmul_tn(param(0).grad, grad_out, hidden_);
        Matrix g_hidden = matmul(grad_out, u_factor());
        add_matmul_tn(param(1).grad, g_hidden, input_);
        add_column_sums(param(2).grad, grad_out);
        Matrix gx = need_input_grad ? matmul(g_hidden, v_factor()) : Matrix();
        clear_cache();
        return gx;
    }

    void clear_cache() override
    {
        cached_ = false;
        input_ = Matrix();
        hidden_ = Matrix();
    }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<LowRankLinear>(*this); }

private:
    Matrix input_;
    Matrix hidden_;
};

/// r(in + out) + out
constexpr std::size_t lowrank_param_count(std::size_t in, std::size_t out, std::size_t rank)
{
    return rank * (in + out) + out;
}

/// in * out + out
constexpr std::size_t linear_param_count(std::size_t in, std::size_t out) { return in * out + out; }

}  // namespace sl2a
