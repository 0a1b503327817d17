#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "sl2a/chebyshev/la_block.hpp"
#include "sl2a/layers/fourier.hpp"
#include "sl2a/layers/linear.hpp"

namespace sl2a {

enum class Architecture { sl2a, sl2a_simple, relu_mlp, relu_pe, siren, gauss };

inline std::string_view to_string(Architecture a)
{
    switch (a) {
    case Architecture::sl2a: return "sl2a";
    case Architecture::sl2a_simple: return "sl2a-simple";
    case Architecture::relu_mlp: return "relu-mlp";
    case Architecture::relu_pe: return "relu-pe";
    case Architecture::siren: return "siren";
    case Architecture::gauss: return "gauss";
    }
    return "?";
}

inline Architecture parse_architecture(std::string_view tag)
{
    for (auto a : {Architecture::sl2a, Architecture::sl2a_simple, Architecture::relu_mlp, Architecture::relu_pe,
                   Architecture::siren, Architecture::gauss}) {
        if (tag == to_string(a)) return a;
    }
    throw ConfigError("unknown architecture '" + std::string(tag) +
                      "' (expected sl2a, sl2a-simple, relu-mlp, relu-pe, siren or gauss)");
}

inline bool is_sl2a(Architecture a) { return a == Architecture::sl2a || a == Architecture::sl2a_simple; }

/// Declarative architecture description.
///
/// Layer layout, with H = hidden_layers and m = width:
///   sl2a / sl2a-simple : tanh -> LA(n->m, D) -> LayerNorm(m) -> H x [linear(m->m), ReLU] -> head(m->out)
///   relu-mlp           : linear(n->m), ReLU -> H x [linear, ReLU] -> head
///   relu-pe            : fourier -> linear(enc->m), ReLU -> H x [linear, ReLU] -> head
///   siren              : linear(n->m), sin(w0 .) -> H x [linear, sin(w0 .)] -> head
///   gauss              : linear(n->m), exp(-(s .)^2) -> H x [linear, gaussian] -> head
/// sl2a multiplies the input of every hidden linear layer by the normalised
/// LA output; sl2a-simple does not. With `rank` set, the hidden layers and the
/// head are low-rank factorised.
struct ModelSpec {
    Architecture architecture = Architecture::sl2a;
    std::size_t input_dim = 2;
    std::size_t output_dim = 3;
    std::size_t width = 256;
    std::size_t hidden_layers = 3;
    std::size_t degree = 512;
    std::optional<std::size_t> rank;
    double omega0 = 30.0;
    double gauss_spread = 10.0;
    FourierEncodingSpec fourier{};
    std::uint64_t seed = 0;

    void validate() const
    {
        if (input_dim == 0) throw ConfigError("ModelSpec: input_dim must be positive");
        if (output_dim == 0) throw ConfigError("ModelSpec: output_dim must be positive");
        if (width == 0) throw ConfigError("ModelSpec: width must be positive");
        if (is_sl2a(architecture) && degree == 0) throw ConfigError("ModelSpec: degree must be positive");
        if (rank && *rank == 0) throw ConfigError("ModelSpec: rank must be positive");
        if (rank && *rank > width) throw ConfigError("ModelSpec: rank exceeds width");
        if (architecture == Architecture::siren && !(omega0 > 0.0)) throw ConfigError("ModelSpec: omega0 must be > 0");
        if (architecture == Architecture::gauss && !(gauss_spread > 0.0))
            throw ConfigError("ModelSpec: gauss_spread must be > 0");
        if (architecture == Architecture::relu_pe && fourier.num_frequencies == 0 && !fourier.include_input)
            throw ConfigError("ModelSpec: empty fourier encoding");
    }
};

/// Parameter count from the closed-form per-layer formulas, independent of
/// any constructed network.
inline std::size_t formula_param_count(const ModelSpec& s)
{
    const std::size_t m = s.width;
    auto dense = [&](std::size_t in, std::size_t out) {
        return s.rank ? lowrank_param_count(in, out, *s.rank) : linear_param_count(in, out);
    };
    std::size_t total = 0;
    switch (s.architecture) {
    case Architecture::sl2a:
    case Architecture::sl2a_simple: total += la_param_count(s.input_dim, m, s.degree) + 2 * m; break;
    case Architecture::relu_pe: total += linear_param_count(s.fourier.output_width(s.input_dim), m); break;
    default: total += linear_param_count(s.input_dim, m); break;
    }
    total += s.hidden_layers * dense(m, m);
    total += dense(m, s.output_dim);
    return total;
}

}  // namespace sl2a
