#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sl2a/numerics/matrix.hpp"
#include "sl2a/numerics/parameter.hpp"
#include "sl2a/numerics/rng.hpp"

namespace sl2a {

/// Anything with an explicit forward/backward pair and trainable parameters:
/// single layers and whole networks both qualify.
template <typename T>
concept Differentiable = requires(T& t, const Matrix& m) {
    { t.forward(m) } -> std::same_as<Matrix>;
    { t.backward(m) } -> std::same_as<Matrix>;
    { t.parameters() } -> std::same_as<std::vector<Parameter*>>;
};

struct GradientCheckOptions {
    double step = 1e-5;
    double tolerance = 1e-4;
    /// Denominator floor of the relative error, so that entries whose true
    /// gradient is ~0 are compared absolutely.
    double floor = 1e-5;
    /// Seed of the random probe weights R in L = sum(R .* f(x)).
    std::uint64_t probe_seed = 0x5eed;
    bool check_input = true;
    /// One-sided differences disagreeing by more than this fraction mark an
    /// entry whose +-step interval straddles a ReLU kink; such entries are
    /// skipped and counted.
    double kink_ratio = 1e-2;
};

struct GradientCheckReport {
    double max_param_error = 0.0;
    double max_input_error = 0.0;
    std::size_t checked = 0;
    std::size_t kinks_skipped = 0;
    std::string worst;  ///< "<param>[i]" or "input[i]" of the largest error
    bool passed = false;

    double max_error() const { return std::max(max_param_error, max_input_error); }
};

namespace detail {

inline double probe_loss(const Matrix& out, const Matrix& probe)
{
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += out.data()[i] * probe.data()[i];
    return s;
}

}  // namespace detail

/// Compares analytic parameter and input gradients of `f` against central
/// finite differences of the probe loss L = sum(R .* f(x)).
template <Differentiable F>
GradientCheckReport gradient_check(F& f, const Matrix& input, const GradientCheckOptions& opt = {})
{
    GradientCheckReport report;
    auto params = f.parameters();
    for (Parameter* p : params) p->zero_grad();

    Matrix out = f.forward(input);
    Rng rng(opt.probe_seed);
    Matrix probe(out.rows(), out.cols());
    for (double& v : probe.data()) v = rng.normal();

    Matrix input_grad = f.backward(probe);
    if (!input_grad.all_finite()) throw NumericalError("gradient_check: non-finite input gradient");
    std::vector<Matrix> analytic;
    analytic.reserve(params.size());
    for (Parameter* p : params) {
        if (!p->grad.all_finite())
            throw NumericalError("gradient_check: non-finite gradient for " + p->name);
        analytic.push_back(p->grad);
    }

    const double h = opt.step;
    auto compare = [&](double a, double lp, double l0, double lm, double& worst_err,
                       const std::string& label) {
        const double central = (lp - lm) / (2.0 * h);
        const double fwd = (lp - l0) / h;
        const double bwd = (l0 - lm) / h;
        const double scale = std::max({std::abs(fwd), std::abs(bwd), opt.floor});
        if (std::abs(fwd - bwd) > opt.kink_ratio * scale && std::abs(a - central) > opt.tolerance * scale) {
            ++report.kinks_skipped;
            return;
        }
        ++report.checked;
        const double err = std::abs(a - central) / std::max({std::abs(a), std::abs(central), opt.floor});
        if (err > worst_err) {
            worst_err = err;
            if (err >= report.max_error()) report.worst = label;
        }
    };

    const double base = detail::probe_loss(f.forward(input), probe);

    for (std::size_t k = 0; k < params.size(); ++k) {
        auto values = params[k]->value.data();
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double saved = values[i];
            values[i] = saved + h;
            const double lp = detail::probe_loss(f.forward(input), probe);
            values[i] = saved - h;
            const double lm = detail::probe_loss(f.forward(input), probe);
            values[i] = saved;
            compare(analytic[k].data()[i], lp, base, lm, report.max_param_error,
                    params[k]->name + "[" + std::to_string(i) + "]");
        }
    }

    if (opt.check_input) {
        Matrix x = input;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double saved = x.data()[i];
            x.data()[i] = saved + h;
            const double lp = detail::probe_loss(f.forward(x), probe);
            x.data()[i] = saved - h;
            const double lm = detail::probe_loss(f.forward(x), probe);
            x.data()[i] = saved;
            compare(input_grad.data()[i], lp, base, lm, report.max_input_error,
                    "input[" + std::to_string(i) + "]");
        }
    }

    // Leave the object with a fresh cache and clean gradients.
    for (Parameter* p : params) p->zero_grad();
    f.forward(input);

    const bool few_kinks = report.kinks_skipped * 100 <= report.checked + report.kinks_skipped;
    report.passed = report.max_error() < opt.tolerance && few_kinks;
    return report;
}

}  // namespace sl2a
