#pragma once

#include <memory>

#include "sl2a/layers/layer.hpp"
#include "sl2a/numerics/elementwise.hpp"

namespace sl2a {

/// Parameter-free elementwise nonlinearity: relu, tanh, sine (sin(w0 x)) or
/// gaussian (exp(-(s x)^2)).
class Activation final : public Layer {
public:
    Activation(ElementwiseOp op, std::size_t width, double param = 1.0) : op_(op), width_(width), param_(param)
    {
        if (op == ElementwiseOp::round) throw ConfigError("Activation: round is not differentiable");
    }

    static Activation relu(std::size_t width) { return {ElementwiseOp::relu, width}; }
    static Activation tanh(std::size_t width) { return {ElementwiseOp::tanh, width}; }
    static Activation sine(std::size_t width, double omega0) { return {ElementwiseOp::sine, width, omega0}; }
    static Activation gaussian(std::size_t width, double spread) { return {ElementwiseOp::gaussian, width, spread}; }

    LayerKind kind() const override { return LayerKind::activation; }
    std::size_t input_width() const override { return width_; }
    std::size_t output_width() const override { return width_; }
    ElementwiseOp op() const { return op_; }
    double hyperparameter() const { return param_; }

    Matrix forward(const Matrix& x) override
    {
        check_input(x, "Activation");
        input_ = x;
        cached_ = true;
        return elementwise(op_, x, param_);
    }

    using Layer::backward;
    Matrix backward(const Matrix& grad_out, bool need_input_grad) override
    {
        require_cache("Activation");
        check_grad(grad_out, input_.rows(), "Activation");
        Matrix gx;
        if (need_input_grad) gx = elementwise_backward(op_, input_, grad_out, param_);
        clear_cache();
        return gx;
    }

    void clear_cache() override
    {
        cached_ = false;
        input_ = Matrix();
    }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<Activation>(*this); }

private:
    ElementwiseOp op_;
    std::size_t width_;
    double param_;
    Matrix input_;
};

}  // namespace sl2a
