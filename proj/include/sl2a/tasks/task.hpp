#pragma once

#include <cmath>
#include <iostream>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "sl2a/numerics/image.hpp"
#include "sl2a/numerics/rng.hpp"
#include "sl2a/tasks/builtin.hpp"
#include "sl2a/tasks/coords.hpp"
#include "sl2a/tasks/radon.hpp"
#include "sl2a/tasks/spectral.hpp"
#include "sl2a/training/metrics.hpp"

namespace sl2a {

enum class TaskKind { image, superres, inpaint, ct, occupancy, spectral };
enum class OperatorKind { identity, mask, radon };
enum class MetricKind { psnr, ssim, iou, spectral };

inline std::string_view to_string(TaskKind k)
{
    switch (k) {
    case TaskKind::image: return "image";
    case TaskKind::superres: return "superres";
    case TaskKind::inpaint: return "inpaint";
    case TaskKind::ct: return "ct";
    case TaskKind::occupancy: return "occupancy";
    case TaskKind::spectral: return "spectral";
    }
    return "?";
}

inline std::string_view to_string(MetricKind k)
{
    switch (k) {
    case MetricKind::psnr: return "psnr";
    case MetricKind::ssim: return "ssim";
    case MetricKind::iou: return "iou";
    case MetricKind::spectral: return "spectral";
    }
    return "?";
}

inline MetricKind parse_metric(std::string_view s)
{
    for (auto k : {MetricKind::psnr, MetricKind::ssim, MetricKind::iou, MetricKind::spectral})
        if (s == to_string(k)) return k;
    throw ConfigError("unknown metric '" + std::string(s) + "'");
}

/// Spectral error is the only lower-is-better metric.
inline bool higher_is_better(MetricKind k) { return k != MetricKind::spectral; }

/// Differentiable map from a rendered field (grid samples x channels) to the
/// measurement domain.
class MeasurementOperator {
public:
    virtual ~MeasurementOperator() = default;
    virtual OperatorKind kind() const = 0;
    virtual Matrix apply(const Matrix& field) const = 0;
    /// Transpose of apply(): pulls a measurement-domain gradient back to the field.
    virtual Matrix adjoint(const Matrix& grad) const = 0;
    /// Pointwise operators act row by row. Task builders apply them up front
    /// by choosing the train rows, which is what allows mini-batching.
    virtual bool pointwise() const { return true; }
};

class IdentityOperator final : public MeasurementOperator {
public:
    OperatorKind kind() const override { return OperatorKind::identity; }
    Matrix apply(const Matrix& field) const override { return field; }
    Matrix adjoint(const Matrix& grad) const override { return grad; }
};

/// Keeps the listed grid rows.
class MaskOperator final : public MeasurementOperator {
public:
    MaskOperator(std::vector<std::size_t> kept, std::size_t grid_size) : kept_(std::move(kept)), grid_size_(grid_size) {}

    OperatorKind kind() const override { return OperatorKind::mask; }
    const std::vector<std::size_t>& kept() const { return kept_; }

    Matrix apply(const Matrix& field) const override
    {
        if (field.rows() != grid_size_) throw ShapeError("MaskOperator: field does not cover the grid");
        return take_rows(field, kept_);
    }

    Matrix adjoint(const Matrix& grad) const override
    {
        if (grad.rows() != kept_.size()) throw ShapeError("MaskOperator: gradient length mismatch");
        Matrix out(grid_size_, grad.cols());
        for (std::size_t i = 0; i < kept_.size(); ++i)
            for (std::size_t c = 0; c < grad.cols(); ++c) out(kept_[i], c) = grad(i, c);
        return out;
    }

private:
    std::vector<std::size_t> kept_;
    std::size_t grid_size_;
};

/// Radon transform of a single-channel S x S field given as (S*S, 1).
class RadonMeasurement final : public MeasurementOperator {
public:
    explicit RadonMeasurement(std::shared_ptr<const RadonOperator> op) : op_(std::move(op)) {}

    OperatorKind kind() const override { return OperatorKind::radon; }
    bool pointwise() const override { return false; }
    const RadonOperator& radon() const { return *op_; }

    Matrix apply(const Matrix& field) const override
    {
        if (field.rows() != op_->side() * op_->side() || field.cols() != 1)
            throw ShapeError("RadonMeasurement: field " + field.shape_str() + " does not match the grid");
        Matrix out(op_->measurement_count(), 1);
        op_->apply(field.data(), out.data());
        return out;
    }

    Matrix adjoint(const Matrix& grad) const override
    {
        if (grad.rows() != op_->measurement_count() || grad.cols() != 1)
            throw ShapeError("RadonMeasurement: gradient shape mismatch");
        Matrix out(op_->side() * op_->side(), 1);
        op_->apply_adjoint(grad.data(), out.data());
        return out;
    }

private:
    std::shared_ptr<const RadonOperator> op_;
};

/// Coordinates, targets and measurement model of one fitting problem.
///
/// With a pointwise operator, train_targets are supervised directly at
/// train_coords. With a global operator (Radon) the network renders the
/// whole train_coords grid each step and train_targets hold the measurements.
struct TaskInstance {
    TaskKind kind = TaskKind::image;
    Matrix train_coords;
    Matrix train_targets;
    Matrix eval_coords;
    Matrix eval_targets;
    CoordinateMap train_map;
    CoordinateMap eval_map;
    std::shared_ptr<const MeasurementOperator> op = std::make_shared<IdentityOperator>();
    MetricKind metric = MetricKind::psnr;
    std::size_t channels = 1;
    std::vector<std::size_t> kept;      ///< inpainting: trained grid rows
    std::vector<std::size_t> held_out;  ///< inpainting: untrained grid rows
    std::size_t mask_resamples = 0;
    SpectralProbe probe;
    double iou_threshold = 0.5;

    OperatorKind operator_kind() const { return op->kind(); }
    std::size_t input_dim() const { return train_coords.cols(); }
    std::size_t output_dim() const { return eval_targets.cols(); }
};

inline void require_unit_range(const ImageBuffer& image, const char* who)
{
    if (image.empty()) throw ShapeError(std::string(who) + ": empty image");
    for (double v : image.values)
        if (!(v >= 0.0 && v <= 1.0)) throw DomainError(std::string(who) + ": channel values must lie in [0, 1]");
}

/// Fit every pixel at its centre coordinate; metric PSNR.
inline TaskInstance make_image_task(const ImageBuffer& image)
{
    require_unit_range(image, "make_image_task");
    TaskInstance t;
    t.kind = TaskKind::image;
    t.eval_map = CoordinateMap::pixel_centers({image.width, image.height});
    t.train_map = t.eval_map;
    t.eval_coords = t.eval_map.grid();
    t.eval_targets = image.to_matrix();
    t.train_coords = t.eval_coords;
    t.train_targets = t.eval_targets;
    t.channels = image.channels;
    return t;
}

/// Box-filter downsampling by `factor` along both axes.
inline ImageBuffer box_downsample(const ImageBuffer& image, std::size_t factor)
{
    if (factor == 0 || image.width % factor != 0 || image.height % factor != 0)
        throw ConfigError("box_downsample: factor " + std::to_string(factor) + " does not divide " +
                          std::to_string(image.width) + "x" + std::to_string(image.height));
    ImageBuffer out(image.width / factor, image.height / factor, image.channels);
    const double inv = 1.0 / static_cast<double>(factor * factor);
    for (std::size_t r = 0; r < out.height; ++r)
        for (std::size_t c = 0; c < out.width; ++c)
            for (std::size_t ch = 0; ch < image.channels; ++ch) {
                double s = 0.0;
                for (std::size_t dr = 0; dr < factor; ++dr)
                    for (std::size_t dc = 0; dc < factor; ++dc) s += image.at(r * factor + dr, c * factor + dc, ch);
                out.at(r, c, ch) = s * inv;
            }
    return out;
}

/// Train on the box-downsampled image, evaluate PSNR on the full grid.
///
/// Low-res pixel (R, C) is placed at the full-res pixel centre
/// (factor*R + factor/2, factor*C + factor/2), so every train coordinate is
/// exactly one of the eval coordinates. For even factors this sits half a
/// full-res pixel from the true centre of the averaged block.
inline TaskInstance make_superres_task(const ImageBuffer& image, std::size_t factor)
{
    require_unit_range(image, "make_superres_task");
    const ImageBuffer low = box_downsample(image, factor);
    TaskInstance t;
    t.kind = TaskKind::superres;
    t.eval_map = CoordinateMap::pixel_centers({image.width, image.height});
    t.eval_coords = t.eval_map.grid();
    t.eval_targets = image.to_matrix();
    t.channels = image.channels;

    t.train_map.sides = {low.width, low.height};
    const double anchor = static_cast<double>(factor / 2);
    for (std::size_t a = 0; a < 2; ++a) {
        const AxisMap& full = t.eval_map.axes[a];
        t.train_map.axes.push_back({full.scale * static_cast<double>(factor), full.normalize(anchor)});
    }
    t.train_coords = t.train_map.grid();
    t.train_targets = low.to_matrix();
    return t;
}

/// Independent Bernoulli(keep_fraction) pixel mask. Trains on kept pixels;
/// PSNR is evaluated on the whole image (held-out PSNR is reported
/// separately by the harness).
inline TaskInstance make_inpainting_task(const ImageBuffer& image, double keep_fraction, Rng& rng)
{
    require_unit_range(image, "make_inpainting_task");
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0))
        throw ConfigError("make_inpainting_task: keep_fraction must be in (0, 1]");
    TaskInstance t = make_image_task(image);
    t.kind = TaskKind::inpaint;
    const std::size_t n = image.pixel_count();
    for (;;) {
        t.kept.clear();
        t.held_out.clear();
        for (std::size_t i = 0; i < n; ++i) (rng.bernoulli(keep_fraction) ? t.kept : t.held_out).push_back(i);
        if (!t.kept.empty()) break;
        ++t.mask_resamples;
        std::cerr << "make_inpainting_task: mask dropped every pixel, resampling (attempt "
                  << t.mask_resamples + 1 << ")\n";
    }
    auto mask = std::make_shared<MaskOperator>(t.kept, n);
    t.train_coords = take_rows(t.eval_coords, t.kept);
    t.train_targets = mask->apply(t.eval_targets);
    t.op = std::move(mask);
    return t;
}

/// The network renders the phantom grid; the loss compares its Radon
/// transform against the phantom's sinogram. Metric: PSNR to the phantom.
inline TaskInstance make_ct_task(const ImageBuffer& phantom, std::size_t num_angles)
{
    if (phantom.width != phantom.height) throw ShapeError("make_ct_task: phantom must be square");
    if (phantom.channels != 1) throw ShapeError("make_ct_task: phantom must be single-channel");
    require_unit_range(phantom, "make_ct_task");
    auto radon = std::make_shared<const RadonOperator>(phantom.width, num_angles);
    auto op = std::make_shared<RadonMeasurement>(radon);
    TaskInstance t;
    t.kind = TaskKind::ct;
    t.eval_map = CoordinateMap::pixel_centers({phantom.width, phantom.height});
    t.train_map = t.eval_map;
    t.eval_coords = t.eval_map.grid();
    t.eval_targets = phantom.to_matrix();
    t.train_coords = t.eval_coords;
    t.train_targets = op->apply(t.eval_targets);
    t.op = std::move(op);
    t.channels = 1;
    return t;
}

/// Voxel-centre coordinates in [-1, 1]^3 with 0/1 targets; metric IoU at 0.5.
inline TaskInstance make_occupancy_task(const VolumeGrid& volume)
{
    if (volume.size() == 0) throw ShapeError("make_occupancy_task: empty volume");
    for (double v : volume.values)
        if (v != 0.0 && v != 1.0) throw DomainError("make_occupancy_task: volume must be binary (0/1)");
    TaskInstance t;
    t.kind = TaskKind::occupancy;
    t.eval_map = CoordinateMap::pixel_centers({volume.nx, volume.ny, volume.nz});
    t.train_map = t.eval_map;
    t.eval_coords = t.eval_map.grid();
    t.eval_targets = Matrix(volume.size(), 1, volume.values);
    t.train_coords = t.eval_coords;
    t.train_targets = t.eval_targets;
    t.metric = MetricKind::iou;
    t.channels = 1;
    return t;
}

/// The rounded-sines probe on `probe.samples` points; metric is the mean
/// relative error over the probed frequencies.
inline TaskInstance make_spectral_task(const SpectralProbe& probe = {})
{
    TaskInstance t;
    t.kind = TaskKind::spectral;
    t.probe = probe;
    t.eval_coords = probe.coords();
    t.eval_targets = spectral_probe_signal(t.eval_coords);
    t.train_coords = t.eval_coords;
    t.train_targets = t.eval_targets;
    t.eval_map.sides = {probe.samples};
    t.eval_map.axes = {{probe.spacing(), probe.lo}};
    t.train_map = t.eval_map;
    t.metric = MetricKind::spectral;
    return t;
}

inline ImageBuffer prediction_image(const TaskInstance& t, const Matrix& prediction)
{
    if (t.eval_map.sides.size() != 2) throw UsageError("prediction_image: task is not an image task");
    return ImageBuffer::from_matrix(prediction, t.eval_map.sides[0], t.eval_map.sides[1]);
}

/// The task's headline metric of `prediction` (eval_coords order).
inline double evaluate_metric(const TaskInstance& t, const Matrix& prediction)
{
    switch (t.metric) {
    case MetricKind::psnr: return psnr(prediction, t.eval_targets);
    case MetricKind::ssim: return ssim(prediction_image(t, prediction), prediction_image(t, t.eval_targets));
    case MetricKind::iou: return iou(prediction.data(), t.eval_targets.data(), t.iou_threshold);
    case MetricKind::spectral: {
        const auto e = frequency_error(prediction.data(), t.eval_targets.data(), t.probe);
        return std::accumulate(e.begin(), e.end(), 0.0) / static_cast<double>(e.size());
    }
    }
    throw ConfigError("unhandled metric");
}

/// Every metric that applies to the task, for summaries.
inline std::map<std::string, double> evaluate_all(const TaskInstance& t, const Matrix& prediction)
{
    std::map<std::string, double> out;
    switch (t.kind) {
    case TaskKind::image:
    case TaskKind::superres:
    case TaskKind::inpaint:
    case TaskKind::ct: {
        out["psnr"] = psnr(prediction, t.eval_targets);
        const auto& s = t.eval_map.sides;
        if (s[0] >= 11 && s[1] >= 11)
            out["ssim"] = ssim(prediction_image(t, prediction), prediction_image(t, t.eval_targets));
        if (t.kind == TaskKind::inpaint && !t.held_out.empty())
            out["psnr_held_out"] = psnr(take_rows(prediction, t.held_out), take_rows(t.eval_targets, t.held_out));
        break;
    }
    case TaskKind::occupancy: out["iou"] = evaluate_metric(t, prediction); break;
    case TaskKind::spectral: {
        const auto e = frequency_error(prediction.data(), t.eval_targets.data(), t.probe);
        for (std::size_t i = 0; i < e.size(); ++i) out[frequency_label(t.probe.frequencies[i])] = e[i];
        out["spectral"] = evaluate_metric(t, prediction);
        break;
    }
    }
    return out;
}

}  // namespace sl2a
