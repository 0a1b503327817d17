#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>

#include "sl2a/numerics/matrix.hpp"

namespace sl2a {

enum class ElementwiseOp { relu, tanh, sine, gaussian, round };

/// Parses "relu" | "tanh" | "sine" | "gaussian" | "round".
inline ElementwiseOp parse_elementwise_op(std::string_view tag)
{
    if (tag == "relu") return ElementwiseOp::relu;
    if (tag == "tanh") return ElementwiseOp::tanh;
    if (tag == "sine") return ElementwiseOp::sine;
    if (tag == "gaussian") return ElementwiseOp::gaussian;
    if (tag == "round") return ElementwiseOp::round;
    throw ConfigError("unknown elementwise op '" + std::string(tag) + "'");
}

/// Scalar kernel. `param` is the frequency for sine (sin(param*x)) and the
/// spread for gaussian (exp(-(param*x)^2)); ignored otherwise.
/// round is half-away-from-zero.
inline double apply_scalar(ElementwiseOp op, double x, double param = 1.0)
{
    switch (op) {
    case ElementwiseOp::relu: return x > 0.0 ? x : 0.0;
    case ElementwiseOp::tanh: return std::tanh(x);
    case ElementwiseOp::sine: return std::sin(param * x);
    case ElementwiseOp::gaussian: {
        const double u = param * x;
        return std::exp(-u * u);
    }
    case ElementwiseOp::round: return std::round(x);
    }
    throw ConfigError("unhandled elementwise op");
}

/// d/dx of apply_scalar. round has zero derivative almost everywhere.
inline double derivative_scalar(ElementwiseOp op, double x, double param = 1.0)
{
    switch (op) {
    case ElementwiseOp::relu: return x > 0.0 ? 1.0 : 0.0;
    case ElementwiseOp::tanh: {
        const double t = std::tanh(x);
        return 1.0 - t * t;
    }
    case ElementwiseOp::sine: return param * std::cos(param * x);
    case ElementwiseOp::gaussian: {
        const double u = param * x;
        return -2.0 * param * u * std::exp(-u * u);
    }
    case ElementwiseOp::round: return 0.0;
    }
    throw ConfigError("unhandled elementwise op");
}

namespace detail {

template <class F>
void map_into(std::span<double> out, std::span<const double> x, F f)
{
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(x[i]);
}

}  // namespace detail

inline Matrix elementwise(ElementwiseOp op, const Matrix& a, double param = 1.0)
{
    Matrix out(a.rows(), a.cols());
    auto o = out.data();
    auto x = a.data();
    switch (op) {
    case ElementwiseOp::relu: detail::view(out).array() = detail::view(a).array().max(0.0); break;
    case ElementwiseOp::tanh: detail::map_into(o, x, [](double v) { return std::tanh(v); }); break;
    default: detail::map_into(o, x, [&](double v) { return apply_scalar(op, v, param); }); break;
    }
    out.require_finite("elementwise");
    return out;
}

/// grad_out * f'(x), elementwise.
inline Matrix elementwise_backward(ElementwiseOp op, const Matrix& x, const Matrix& grad_out, double param = 1.0)
{
    if (!x.same_shape(grad_out)) throw ShapeError("elementwise_backward: shape mismatch");
    Matrix out(x.rows(), x.cols());
    auto o = out.data();
    const auto xv = x.data();
    const auto g = grad_out.data();
    if (op == ElementwiseOp::relu) {
        detail::view(out).array() = (detail::view(x).array() > 0.0).select(detail::view(grad_out).array(), 0.0);
    } else {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = g[i] * derivative_scalar(op, xv[i], param);
    }
    return out;
}

inline Matrix elementwise(std::string_view tag, const Matrix& a, double param = 1.0)
{
    return elementwise(parse_elementwise_op(tag), a, param);
}

}  // namespace sl2a
