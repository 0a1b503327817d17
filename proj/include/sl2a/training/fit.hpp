#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sl2a/models/network.hpp"
#include "sl2a/numerics/rng.hpp"
#include "sl2a/tasks/task.hpp"
#include "sl2a/training/adam.hpp"
#include "sl2a/training/loss.hpp"

namespace sl2a {

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t batch_size = 0;  ///< 0 means full batch
    std::size_t epochs = 500;
    AdamConfig adam;
    std::uint64_t seed = 0;      ///< batch shuffling
    std::size_t log_every = 1;
    double lr_decay = 1.0;       ///< learning rate multiplied by this after every epoch
    std::optional<double> target_metric;  ///< stop once the logged metric reaches it
    bool log_wall_clock = false; ///< otherwise per-epoch seconds are logged as 0
    bool restore_best = true;    ///< leave the best-metric parameters in the network

    void validate() const
    {
        std::vector<std::string> bad;
        if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) bad.push_back("learning_rate");
        if (epochs == 0) bad.push_back("epochs");
        if (log_every == 0) bad.push_back("log_every");
        if (!(lr_decay > 0.0 && lr_decay <= 1.0)) bad.push_back("lr_decay");
        if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0)) bad.push_back("adam.beta1");
        if (!(adam.beta2 >= 0.0 && adam.beta2 < 1.0)) bad.push_back("adam.beta2");
        if (!(adam.epsilon > 0.0)) bad.push_back("adam.epsilon");
        if (!bad.empty()) {
            std::string msg = "invalid training config:";
            for (const auto& b : bad) msg += " " + b;
            throw ConfigError(msg);
        }
    }
};

struct EpochRecord {
    std::size_t epoch = 0;
    double loss = 0.0;
    double metric = 0.0;
    double seconds = 0.0;
};

struct TrainReport {
    MetricKind metric = MetricKind::psnr;
    std::vector<EpochRecord> records;
    std::size_t best_epoch = 0;
    double best_metric = std::numeric_limits<double>::quiet_NaN();
    std::vector<Matrix> best_params;
    Matrix best_prediction;
    double final_loss = 0.0;
    std::size_t epochs_run = 0;
    std::size_t steps = 0;
    double total_seconds = 0.0;
    bool stopped_early = false;
};

/// Called at every logged epoch with the record and the eval-grid prediction.
using EpochObserver = std::function<void(const EpochRecord&, const Matrix& prediction)>;

namespace detail {

inline bool improves(MetricKind k, double candidate, double best)
{
    if (std::isnan(best)) return true;
    return higher_is_better(k) ? candidate > best : candidate < best;
}

inline bool reaches(MetricKind k, double value, double target)
{
    return higher_is_better(k) ? value >= target : value <= target;
}

inline std::string gradient_norms(Network& net)
{
    std::ostringstream os;
    const auto names = net.parameter_names();
    const auto params = net.parameters();
    for (std::size_t i = 0; i < params.size(); ++i) {
        double s = 0.0;
        for (double g : params[i]->grad.data()) s += g * g;
        os << "\n  " << names[i] << ": |grad| = " << std::sqrt(s);
    }
    return os.str();
}

[[noreturn]] inline void diverged(Network& net, std::size_t epoch, double lr, const std::string& what)
{
    throw NumericalError("training diverged at epoch " + std::to_string(epoch) + " (lr " + std::to_string(lr) +
                         "): " + what + gradient_norms(net));
}

}  // namespace detail

/// Accumulates the gradient of one step on (coords, targets) and returns the
/// loss. Pointwise operators were already applied when the task selected its
/// train rows, so only global operators sit between network and loss.
inline double train_step(Network& net, const MeasurementOperator& op, const Matrix& coords, const Matrix& targets)
{
    const Matrix field = net.forward(coords);
    LossResult loss = op.pointwise() ? mse_loss(field, targets) : mse_loss(op.apply(field), targets);
    if (!std::isfinite(loss.value)) {
        net.clear_cache();
        throw NumericalError("non-finite loss");
    }
    net.backward(op.pointwise() ? loss.grad : op.adjoint(loss.grad), false);
    return loss.value;
}

/// Adam on the MSE between operator(network(train_coords)) and train_targets.
///
/// Epochs are numbered from 1. The task metric is evaluated on the eval grid
/// every `log_every` epochs, and only logged epochs compete for the best
/// snapshot. Non-pointwise operators (Radon) always train full batch.
inline TrainReport fit(Network& net, const TaskInstance& task, const TrainConfig& cfg,
                       const EpochObserver& observer = {})
{
    cfg.validate();
    if (task.input_dim() != net.spec().input_dim || task.output_dim() != net.spec().output_dim)
        throw ShapeError("fit: task dimensions (" + std::to_string(task.input_dim()) + " -> " +
                         std::to_string(task.output_dim()) + ") do not match the network");

    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    TrainReport report;
    report.metric = task.metric;

    const std::size_t n = task.train_coords.rows();
    const bool pointwise = task.op->pointwise();
    const std::size_t batch = (!pointwise || cfg.batch_size == 0) ? n : std::min(cfg.batch_size, n);
    Rng rng(cfg.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    Adam adam(cfg.adam);
    const auto params = net.parameters();
    net.zero_grad();
    double lr = cfg.learning_rate;

    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
        double loss_sum = 0.0;
        try {
            if (batch == n) {
                loss_sum = train_step(net, *task.op, task.train_coords, task.train_targets) * static_cast<double>(n);
                adam.step(params, lr);
            } else {
                rng.shuffle(order);
                for (std::size_t begin = 0; begin < n; begin += batch) {
                    const std::size_t end = std::min(n, begin + batch);
                    const std::span<const std::size_t> idx(order.data() + begin, end - begin);
                    loss_sum += train_step(net, *task.op, take_rows(task.train_coords, idx),
                                           take_rows(task.train_targets, idx)) *
                                static_cast<double>(end - begin);
                    adam.step(params, lr);
                }
            }
        } catch (const NumericalError& e) {
            detail::diverged(net, epoch, lr, e.what());
        }
        const double loss = loss_sum / static_cast<double>(n);
        if (!std::isfinite(loss)) detail::diverged(net, epoch, lr, "non-finite epoch loss");
        report.final_loss = loss;
        report.epochs_run = epoch;

        if (epoch % cfg.log_every == 0) {
            const Matrix pred = net.predict(task.eval_coords);
            EpochRecord rec{epoch, loss, evaluate_metric(task, pred), 0.0};
            if (cfg.log_wall_clock) rec.seconds = std::chrono::duration<double>(clock::now() - start).count();
            report.records.push_back(rec);
            if (detail::improves(task.metric, rec.metric, report.best_metric)) {
                report.best_metric = rec.metric;
                report.best_epoch = epoch;
                report.best_params = net.snapshot();
                report.best_prediction = pred;
            }
            if (observer) observer(rec, pred);
            if (cfg.target_metric && detail::reaches(task.metric, rec.metric, *cfg.target_metric)) {
                report.stopped_early = epoch < cfg.epochs;
                break;
            }
        }
        lr *= cfg.lr_decay;
    }

    report.steps = adam.steps();
    if (cfg.restore_best && !report.best_params.empty()) net.restore(report.best_params);
    report.total_seconds = std::chrono::duration<double>(clock::now() - start).count();
    return report;
}

struct GridPoint {
    double learning_rate = 0.0;
    std::size_t batch_size = 0;
    double best_metric = 0.0;
    std::size_t best_epoch = 0;
    double final_loss = 0.0;
    double seconds = 0.0;
};

/// Trains a fresh network from `spec` for every (lr, batch) pair.
inline std::vector<GridPoint> grid_search(const ModelSpec& spec, const TaskInstance& task, const TrainConfig& base,
                                          const std::vector<double>& learning_rates,
                                          const std::vector<std::size_t>& batch_sizes)
{
    if (learning_rates.empty() || batch_sizes.empty()) throw ConfigError("grid_search: empty grid");
    std::vector<GridPoint> out;
    for (double lr : learning_rates)
        for (std::size_t b : batch_sizes) {
            Network net = build(spec);
            TrainConfig cfg = base;
            cfg.learning_rate = lr;
            cfg.batch_size = b;
            const TrainReport r = fit(net, task, cfg);
            out.push_back({lr, b, r.best_metric, r.best_epoch, r.final_loss, r.total_seconds});
        }
    return out;
}

/// Index of the best grid point under the metric's direction.
inline std::size_t best_grid_point(const std::vector<GridPoint>& grid, MetricKind metric)
{
    if (grid.empty()) throw ConfigError("best_grid_point: empty grid");
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (detail::improves(metric, grid[i].best_metric, grid[best].best_metric)) best = i;
    return best;
}

}  // namespace sl2a
