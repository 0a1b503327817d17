#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "sl2a/chebyshev/la_block.hpp"
#include "sl2a/layers/activation.hpp"
#include "sl2a/layers/fourier.hpp"
#include "sl2a/layers/layernorm.hpp"
#include "sl2a/layers/linear.hpp"
#include "sl2a/models/spec.hpp"
#include "sl2a/numerics/rng.hpp"

namespace sl2a {

/// A built coordinate network, f_theta: R^n -> R^out.
class Network {
public:
    Network(const ModelSpec& spec, Rng& rng) : spec_(spec)
    {
        spec_.validate();
        const std::size_t n = spec_.input_dim;
        const std::size_t m = spec_.width;

        switch (spec_.architecture) {
        case Architecture::sl2a:
        case Architecture::sl2a_simple:
            layers_.push_back(std::make_unique<Activation>(Activation::tanh(n)));
            layers_.push_back(std::make_unique<ChebyshevLA>(n, m, spec_.degree, rng));
            layers_.push_back(std::make_unique<LayerNorm>(m));
            break;
        case Architecture::relu_mlp:
            layers_.push_back(std::make_unique<Linear>(n, m, rng));
            layers_.push_back(std::make_unique<Activation>(Activation::relu(m)));
            break;
        case Architecture::relu_pe: {
            auto enc = std::make_unique<FourierEncoding>(spec_.fourier, n);
            const std::size_t enc_width = enc->output_width();
            layers_.push_back(std::move(enc));
            layers_.push_back(std::make_unique<Linear>(enc_width, m, rng));
            layers_.push_back(std::make_unique<Activation>(Activation::relu(m)));
            break;
        }
        case Architecture::siren: {
            // First layer U(-1/in, 1/in); bias keeps the fan-in default.
            auto first = std::make_unique<Linear>(n, m);
            first->init_uniform(rng, 1.0 / static_cast<double>(n), fan_in_bound(n));
            layers_.push_back(std::move(first));
            layers_.push_back(std::make_unique<Activation>(Activation::sine(m, spec_.omega0)));
            break;
        }
        case Architecture::gauss:
            layers_.push_back(std::make_unique<Linear>(n, m, rng));
            layers_.push_back(std::make_unique<Activation>(Activation::gaussian(m, spec_.gauss_spread)));
            break;
        }
        front_size_ = layers_.size();

        for (std::size_t l = 0; l < spec_.hidden_layers; ++l) {
            layers_.push_back(make_dense(m, m, rng));
            layers_.push_back(hidden_activation());
        }
        layers_.push_back(make_dense(m, spec_.output_dim, rng));
    }

    Network(const Network& other) : spec_(other.spec_), front_size_(other.front_size_), force_ones_(other.force_ones_)
    {
        layers_.reserve(other.layers_.size());
        for (const auto& l : other.layers_) layers_.push_back(l->clone());
    }

    Network& operator=(const Network& other)
    {
        if (this != &other) {
            Network tmp(other);
            *this = std::move(tmp);
        }
        return *this;
    }

    Network(Network&&) noexcept = default;
    Network& operator=(Network&&) noexcept = default;

    const ModelSpec& spec() const { return spec_; }
    std::size_t input_dim() const { return spec_.input_dim; }
    std::size_t output_dim() const { return spec_.output_dim; }

    bool modulated() const { return spec_.architecture == Architecture::sl2a; }

    /// Test hook: replace the Hadamard modulator by a matrix of ones while
    /// leaving y_1 = LayerNorm(LA(tanh x)) untouched.
    void force_modulator_ones(bool on) { force_ones_ = on; }

    std::size_t layer_count() const { return layers_.size(); }
    Layer& layer(std::size_t i) { return *layers_.at(i); }
    const Layer& layer(std::size_t i) const { return *layers_.at(i); }

    /// Index of the first hidden linear layer; layers before it form the front end.
    std::size_t front_size() const { return front_size_; }

    std::vector<Parameter*> parameters()
    {
        std::vector<Parameter*> out;
        for (auto& l : layers_) {
            auto p = l->parameters();
            out.insert(out.end(), p.begin(), p.end());
        }
        return out;
    }

    std::size_t count_params() const
    {
        std::size_t n = 0;
        for (const auto& l : layers_) n += l->param_count();
        return n;
    }

    void zero_grad()
    {
        for (auto& l : layers_) l->zero_grad();
    }

    void clear_cache()
    {
        for (auto& l : layers_) l->clear_cache();
        modulator_ = Matrix();
        hidden_inputs_.clear();
    }

    Matrix forward(const Matrix& coords)
    {
        if (coords.cols() != spec_.input_dim)
            throw ShapeError("Network::forward: expected " + std::to_string(spec_.input_dim) + " coordinate columns, got " +
                             std::to_string(coords.cols()));
        if (!is_sl2a(spec_.architecture)) {
            Matrix y = coords;
            for (auto& l : layers_) y = l->forward(y);
            return y;
        }

        Matrix psi = coords;
        for (std::size_t i = 0; i < front_size_; ++i) psi = layers_[i]->forward(psi);
        const bool modulate = modulated();
        modulator_ = modulate && force_ones_ ? Matrix(psi.rows(), psi.cols(), 1.0) : psi;
        hidden_inputs_.clear();

        Matrix y = psi;
        for (std::size_t l = 0; l < spec_.hidden_layers; ++l) {
            hidden_inputs_.push_back(y);
            Matrix z = modulate ? hadamard(y, modulator_) : y;
            z = hidden_linear(l).forward(z);
            y = hidden_act(l).forward(z);
        }
        return layers_.back()->forward(y);
    }

    Matrix backward(const Matrix& grad_out) { return backward(grad_out, true); }

    /// Accumulates every parameter gradient. The returned coordinate gradient
    /// is empty when `need_input_grad` is false.
    Matrix backward(const Matrix& grad_out, bool need_input_grad)
    {
        if (!is_sl2a(spec_.architecture)) {
            Matrix g = grad_out;
            return backward_range(layers_.size(), std::move(g), need_input_grad);
        }
        if (hidden_inputs_.size() != spec_.hidden_layers)
            throw UsageError("Network::backward: called without a matching forward");

        const bool modulate = modulated();
        const bool through_modulator = modulate && !force_ones_;
        Matrix g = layers_.back()->backward(grad_out, true);
        Matrix g_psi;
        for (std::size_t l = spec_.hidden_layers; l-- > 0;) {
            g = hidden_act(l).backward(g, true);
            Matrix gz = hidden_linear(l).backward(g, true);
            if (through_modulator) {
                Matrix contrib = hadamard(gz, hidden_inputs_[l]);
                if (g_psi.empty()) g_psi = std::move(contrib);
                else accumulate(g_psi, contrib);
            }
            g = modulate ? hadamard(gz, modulator_) : std::move(gz);
        }
        // g is now dL/dy_1 and y_1 is the LA output itself.
        if (g_psi.empty()) g_psi = std::move(g);
        else accumulate(g_psi, g);

        hidden_inputs_.clear();
        modulator_ = Matrix();
        return backward_range(front_size_, std::move(g_psi), need_input_grad);
    }

    /// Chunked inference; leaves no cache behind.
    Matrix predict(const Matrix& coords, std::size_t chunk = 8192)
    {
        Matrix out(coords.rows(), spec_.output_dim);
        for (std::size_t begin = 0; begin < coords.rows(); begin += chunk) {
            const std::size_t end = std::min(coords.rows(), begin + chunk);
            Matrix part = forward(row_slice(coords, begin, end));
            std::copy(part.data().begin(), part.data().end(),
                      out.data().begin() + static_cast<std::ptrdiff_t>(begin * spec_.output_dim));
        }
        clear_cache();
        return out;
    }

    /// Copies of every parameter value, in parameters() order.
    std::vector<Matrix> snapshot() const
    {
        std::vector<Matrix> out;
        for (const auto& l : layers_)
            for (const auto& p : l->params()) out.push_back(p.value);
        return out;
    }

    void restore(const std::vector<Matrix>& values)
    {
        auto params = parameters();
        if (values.size() != params.size()) throw ShapeError("Network::restore: parameter count mismatch");
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (!values[i].same_shape(params[i]->value)) throw ShapeError("Network::restore: shape mismatch");
            params[i]->value = values[i];
        }
    }

    /// Layer-qualified names matching parameters(), e.g. "3.linear.weight".
    std::vector<std::string> parameter_names() const
    {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < layers_.size(); ++i)
            for (const auto& p : layers_[i]->params())
                out.push_back(std::to_string(i) + "." + std::string(to_string(layers_[i]->kind())) + "." + p.name);
        return out;
    }

    Layer& hidden_linear(std::size_t l) { return *layers_[front_size_ + 2 * l]; }
    Layer& hidden_act(std::size_t l) { return *layers_[front_size_ + 2 * l + 1]; }
    Layer& head() { return *layers_.back(); }

private:
    /// Back-propagates through layers [0, end), stopping early once no
    /// trainable layer remains below and no input gradient is wanted.
    Matrix backward_range(std::size_t end, Matrix g, bool need_input_grad)
    {
        for (std::size_t i = end; i-- > 0;) {
            const bool want = need_input_grad || has_params_below(i);
            g = layers_[i]->backward(g, want);
            if (!want) {
                for (std::size_t j = 0; j < i; ++j) layers_[j]->clear_cache();
                return Matrix();
            }
        }
        return g;
    }

    bool has_params_below(std::size_t i) const
    {
        for (std::size_t j = 0; j < i; ++j)
            if (layers_[j]->param_count() > 0) return true;
        return false;
    }

    std::unique_ptr<Layer> make_dense(std::size_t in, std::size_t out, Rng& rng) const
    {
        const bool siren = spec_.architecture == Architecture::siren;
        if (spec_.rank) {
            auto layer = std::make_unique<LowRankLinear>(in, out, *spec_.rank, rng, true);
            return layer;
        }
        if (siren) {
            // U(-sqrt(6/in)/w0, sqrt(6/in)/w0) for layers after the first.
            auto layer = std::make_unique<Linear>(in, out);
            layer->init_uniform(rng, std::sqrt(6.0 / static_cast<double>(in)) / spec_.omega0, fan_in_bound(in));
            return layer;
        }
        return std::make_unique<Linear>(in, out, rng);
    }

    std::unique_ptr<Layer> hidden_activation() const
    {
        const std::size_t m = spec_.width;
        switch (spec_.architecture) {
        case Architecture::siren: return std::make_unique<Activation>(Activation::sine(m, spec_.omega0));
        case Architecture::gauss: return std::make_unique<Activation>(Activation::gaussian(m, spec_.gauss_spread));
        default: return std::make_unique<Activation>(Activation::relu(m));
        }
    }

    ModelSpec spec_;
    std::vector<std::unique_ptr<Layer>> layers_;
    std::size_t front_size_ = 0;
    bool force_ones_ = false;
    Matrix modulator_;
    std::vector<Matrix> hidden_inputs_;
};

inline Network build(const ModelSpec& spec)
{
    Rng rng(spec.seed);
    return Network(spec, rng);
}

inline Network build(const ModelSpec& spec, Rng& rng) { return Network(spec, rng); }

}  // namespace sl2a
