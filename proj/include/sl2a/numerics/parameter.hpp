#pragma once

#include <string>
#include <utility>

#include "sl2a/numerics/matrix.hpp"

namespace sl2a {

/// A named trainable array and its gradient buffer. `grad` always mirrors
/// the shape of `value`.
struct Parameter {
    Parameter() = default;
    Parameter(std::string n, Matrix v)
        : name(std::move(n)), value(std::move(v)), grad(value.rows(), value.cols()) {}

    std::string name;
    Matrix value;
    Matrix grad;

    void zero_grad() { grad.fill(0.0); }
};

}  // namespace sl2a
