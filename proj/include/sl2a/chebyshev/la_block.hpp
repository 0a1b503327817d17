#pragma once

#include <cmath>
#include <memory>

#include "sl2a/chebyshev/basis.hpp"
#include "sl2a/layers/layer.hpp"
#include "sl2a/numerics/rng.hpp"

namespace sl2a {

/// n * m * D
constexpr std::size_t la_param_count(std::size_t n, std::size_t m, std::size_t degree) { return n * m * degree; }

/// Learnable-activation block: a grid of m x n one-dimensional functions
///
///     out_j = sum_i psi_{j,i}(x_i),   psi_{j,i}(x) = sum_{d=1..D} a[j,i,d] T_d(x)
///
/// with no constant term and no bias. Inputs must lie in [-1, 1].
///
/// The coefficient tensor a is stored as an (m, n*D) matrix with a[j,i,d] at
/// column i*D + (d-1), which matches the column layout of ChebyshevBasis::eval.
/// The forward pass is then the product basis(x) * A^T and the coefficient
/// gradient is grad_out^T * basis(x).
class ChebyshevLA final : public Layer {
public:
    ChebyshevLA(std::size_t n, std::size_t m, std::size_t degree) : basis_(degree), n_(n)
    {
        if (n == 0 || m == 0) throw ConfigError("ChebyshevLA: zero width");
        params_.emplace_back("coefficients", Matrix(m, n * degree));
    }

    /// Coefficients ~ N(0, 1/(n*D)).
    ChebyshevLA(std::size_t n, std::size_t m, std::size_t degree, Rng& rng) : ChebyshevLA(n, m, degree)
    {
        const double sd = 1.0 / std::sqrt(static_cast<double>(n * degree));
        for (double& v : coefficients().data()) v = rng.normal(0.0, sd);
    }

    LayerKind kind() const override { return LayerKind::chebyshev_la; }
    std::size_t input_width() const override { return n_; }
    std::size_t output_width() const override { return coefficients().rows(); }
    std::size_t degree() const { return basis_.degree(); }

    Matrix& coefficients() { return param(0).value; }
    const Matrix& coefficients() const { return param(0).value; }
    Matrix& coefficient_grad() { return param(0).grad; }

    /// a[j,i,d] for d in 1..D.
    double& coefficient(std::size_t j, std::size_t i, std::size_t d)
    {
        return coefficients()(j, i * degree() + (d - 1));
    }
    double coefficient(std::size_t j, std::size_t i, std::size_t d) const
    {
        return coefficients()(j, i * degree() + (d - 1));
    }

    Matrix forward(const Matrix& x) override
    {
        check_input(x, "ChebyshevLA");
        basis_values_ = basis_.eval(x);
        input_ = x;
        cached_ = true;
        return matmul_nt(basis_values_, coefficients());
    }

    using Layer::backward;
    Matrix backward(const Matrix& grad_out, bool need_input_grad) override
    {
        require_cache("ChebyshevLA");
        check_grad(grad_out, input_.rows(), "ChebyshevLA");
        add_matmul_tn(param(0).grad, grad_out, basis_values_);
        Matrix gx;
        if (need_input_grad) {
            const Matrix g_basis = matmul(grad_out, coefficients());
            const Matrix dt = basis_.eval_derivative(input_);
            const std::size_t D = degree();
            gx = Matrix(input_.rows(), n_);
            for (std::size_t r = 0; r < input_.rows(); ++r) {
                const auto gb = g_basis.row(r);
                const auto dr = dt.row(r);
                for (std::size_t i = 0; i < n_; ++i) {
                    double acc = 0.0;
                    for (std::size_t d = 0; d < D; ++d) acc += gb[i * D + d] * dr[i * D + d];
                    gx(r, i) = acc;
                }
            }
        }
        clear_cache();
        return gx;
    }

    void clear_cache() override
    {
        cached_ = false;
        basis_values_ = Matrix();
        input_ = Matrix();
    }

    std::unique_ptr<Layer> clone() const override { return std::make_unique<ChebyshevLA>(*this); }

private:
    ChebyshevBasis basis_;
    std::size_t n_;
    Matrix basis_values_;
    Matrix input_;
};

}  // namespace sl2a
