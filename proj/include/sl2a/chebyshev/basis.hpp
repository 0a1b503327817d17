#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "sl2a/numerics/matrix.hpp"

namespace sl2a {

/// Inputs further than this outside [-1, 1] are rejected.
inline constexpr double kChebyshevDomainSlack = 1e-12;

inline void check_chebyshev_domain(double x)
{
    if (!(std::abs(x) <= 1.0 + kChebyshevDomainSlack))
        throw DomainError("Chebyshev basis: input " + std::to_string(x) + " outside [-1, 1]");
}

/// Writes T_1(x)..T_D(x) into out[0..D-1] via T_{d+1} = 2x T_d - T_{d-1}.
inline void chebyshev_t_values(double x, std::span<double> out)
{
    double prev = 1.0;  // T_0
    double cur = x;     // T_1
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = cur;
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
}

/// Writes dT_d/dx = d U_{d-1}(x) for d = 1..D into out[0..D-1], with the
/// second-kind recurrence U_0 = 1, U_1 = 2x, U_{k+1} = 2x U_k - U_{k-1}.
inline void chebyshev_dt_values(double x, std::span<double> out)
{
    double prev = 0.0;  // U_{-1}
    double cur = 1.0;   // U_0
    for (std::size_t d = 0; d < out.size(); ++d) {
        out[d] = static_cast<double>(d + 1) * cur;
        const double next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
}

/// Evaluator for T_1..T_D over every entry of a matrix.
class ChebyshevBasis {
public:
    explicit ChebyshevBasis(std::size_t degree) : degree_(degree)
    {
        if (degree == 0) throw ConfigError("ChebyshevBasis: degree must be >= 1");
    }

    std::size_t degree() const { return degree_; }

    /// Returns an (N, n*D) matrix: column i*D + (d-1) holds T_d(x(r, i)).
    Matrix eval(const Matrix& x) const
    {
        Matrix out(x.rows(), x.cols() * degree_);
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const auto in = x.row(r);
            auto row = out.row(r);
            for (std::size_t i = 0; i < in.size(); ++i) {
                check_chebyshev_domain(in[i]);
                chebyshev_t_values(in[i], row.subspan(i * degree_, degree_));
            }
        }
        return out;
    }

    /// Same layout as eval(), holding dT_d/dx.
    Matrix eval_derivative(const Matrix& x) const
    {
        Matrix out(x.rows(), x.cols() * degree_);
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const auto in = x.row(r);
            auto row = out.row(r);
            for (std::size_t i = 0; i < in.size(); ++i) {
                check_chebyshev_domain(in[i]);
                chebyshev_dt_values(in[i], row.subspan(i * degree_, degree_));
            }
        }
        return out;
    }

private:
    std::size_t degree_;
};

inline Matrix chebyshev_eval(const ChebyshevBasis& basis, const Matrix& x) { return basis.eval(x); }

}  // namespace sl2a
