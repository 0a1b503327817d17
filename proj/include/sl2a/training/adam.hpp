#pragma once

#include <cmath>
#include <vector>

#include "sl2a/numerics/parameter.hpp"

namespace sl2a {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers are created lazily on the first
/// step and keyed by position in the parameter list.
class Adam {
public:
    explicit Adam(AdamConfig cfg = {}) : cfg_(cfg) {}

    std::size_t steps() const { return t_; }

    /// Applies one update from the accumulated gradients, then zeroes them.
    void step(const std::vector<Parameter*>& params, double lr)
    {
        if (first_.empty()) {
            for (const Parameter* p : params) {
                first_.emplace_back(p->value.rows(), p->value.cols());
                second_.emplace_back(p->value.rows(), p->value.cols());
            }
        }
        if (first_.size() != params.size()) throw ShapeError("Adam: parameter list changed between steps");
        ++t_;
        const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
        const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
        for (std::size_t k = 0; k < params.size(); ++k) {
            auto w = params[k]->value.data();
            auto g = params[k]->grad.data();
            auto m = first_[k].data();
            auto v = second_[k].data();
            for (std::size_t i = 0; i < w.size(); ++i) {
                m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
                v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
                const double m_hat = m[i] / c1;
                const double v_hat = v[i] / c2;
                w[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
                g[i] = 0.0;
            }
        }
    }

private:
    AdamConfig cfg_;
    std::size_t t_ = 0;
    std::vector<Matrix> first_;
    std::vector<Matrix> second_;
};

}  // namespace sl2a
