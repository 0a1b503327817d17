#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sl2a/numerics/matrix.hpp"
#include "sl2a/numerics/parameter.hpp"

namespace sl2a {

enum class LayerKind { linear, lowrank_linear, activation, layernorm, fourier, chebyshev_la };

inline std::string_view to_string(LayerKind k)
{
    switch (k) {
    case LayerKind::linear: return "linear";
    case LayerKind::lowrank_linear: return "lowrank_linear";
    case LayerKind::activation: return "activation";
    case LayerKind::layernorm: return "layernorm";
    case LayerKind::fourier: return "fourier";
    case LayerKind::chebyshev_la: return "chebyshev_la";
    }
    return "?";
}

/// The differentiable-layer contract.
///
/// forward() caches whatever backward() needs. backward() consumes the cache:
/// it returns the gradient with respect to the forward input, adds parameter
/// gradients into Parameter::grad, and invalidates the cache, so a second
/// backward without a new forward raises UsageError.
class Layer {
public:
    virtual ~Layer() = default;

    virtual LayerKind kind() const = 0;
    virtual std::size_t input_width() const = 0;
    virtual std::size_t output_width() const = 0;

    virtual Matrix forward(const Matrix& x) = 0;

    /// `need_input_grad == false` lets the first layer of a network skip the
    /// input-gradient product; an empty matrix is returned in that case.
    virtual Matrix backward(const Matrix& grad_out, bool need_input_grad) = 0;

    Matrix backward(const Matrix& grad_out) { return backward(grad_out, true); }

    virtual std::unique_ptr<Layer> clone() const = 0;

    std::vector<Parameter*> parameters()
    {
        std::vector<Parameter*> out;
        out.reserve(params_.size());
        for (auto& p : params_) out.push_back(&p);
        return out;
    }

    const std::vector<Parameter>& params() const { return params_; }

    std::size_t param_count() const
    {
        std::size_t n = 0;
        for (const auto& p : params_) n += p.value.size();
        return n;
    }

    void zero_grad()
    {
        for (auto& p : params_) p.zero_grad();
    }

    bool has_cache() const { return cached_; }
    virtual void clear_cache() { cached_ = false; }

protected:
    Layer() = default;
    Layer(const Layer&) = default;
    Layer& operator=(const Layer&) = default;

    Parameter& param(std::size_t i) { return params_[i]; }
    const Parameter& param(std::size_t i) const { return params_[i]; }

    void require_cache(const char* who) const
    {
        if (!cached_) throw UsageError(std::string(who) + ": backward called without a matching forward");
    }

    void check_input(const Matrix& x, const char* who) const
    {
        if (x.cols() != input_width())
            throw ShapeError(std::string(who) + ": expected " + std::to_string(input_width()) +
                             " input columns, got " + std::to_string(x.cols()));
    }

    void check_grad(const Matrix& g, std::size_t rows, const char* who) const
    {
        if (g.cols() != output_width() || g.rows() != rows)
            throw ShapeError(std::string(who) + ": grad_out shape " + g.shape_str() + " does not match output");
    }

    std::vector<Parameter> params_;
    bool cached_ = false;
};

}  // namespace sl2a
