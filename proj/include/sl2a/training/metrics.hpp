#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "sl2a/numerics/image.hpp"
#include "sl2a/numerics/matrix.hpp"

namespace sl2a {

/// Returned by psnr() when the two signals are identical.
inline constexpr double kPsnrCeiling = 200.0;

inline double mean_squared_error(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) throw ShapeError("mean_squared_error: length mismatch");
    if (a.empty()) throw ShapeError("mean_squared_error: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s / static_cast<double>(a.size());
}

/// 10 log10(peak^2 / MSE), capped at kPsnrCeiling.
inline double psnr(std::span<const double> pred, std::span<const double> ref, double peak = 1.0)
{
    if (!(peak > 0.0)) throw DomainError("psnr: peak must be positive");
    const double mse = mean_squared_error(pred, ref);
    if (mse == 0.0) return kPsnrCeiling;
    return std::min(kPsnrCeiling, 10.0 * std::log10(peak * peak / mse));
}

inline double psnr(const Matrix& pred, const Matrix& ref, double peak = 1.0)
{
    if (!pred.same_shape(ref)) throw ShapeError("psnr: " + pred.shape_str() + " vs " + ref.shape_str());
    return psnr(pred.data(), ref.data(), peak);
}

struct SsimParams {
    std::size_t window = 11;
    double sigma = 1.5;
    double k1 = 0.01;
    double k2 = 0.03;
    double dynamic_range = 1.0;
};

/// Normalised 1-D Gaussian taps.
inline std::vector<double> gaussian_taps(std::size_t window, double sigma)
{
    std::vector<double> taps(window);
    const double centre = (static_cast<double>(window) - 1.0) / 2.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < window; ++i) {
        const double d = static_cast<double>(i) - centre;
        taps[i] = std::exp(-d * d / (2.0 * sigma * sigma));
        sum += taps[i];
    }
    for (double& t : taps) t /= sum;
    return taps;
}

namespace detail {

/// Valid-mode separable filtering of a (h, w) plane.
inline Matrix filter_valid(const Matrix& plane, const std::vector<double>& taps)
{
    const std::size_t k = taps.size();
    const std::size_t oh = plane.rows() - k + 1;
    const std::size_t ow = plane.cols() - k + 1;
    Matrix horiz(plane.rows(), ow);
    for (std::size_t r = 0; r < plane.rows(); ++r) {
        const auto in = plane.row(r);
        for (std::size_t c = 0; c < ow; ++c) {
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += taps[t] * in[c + t];
            horiz(r, c) = s;
        }
    }
    Matrix out(oh, ow);
    for (std::size_t r = 0; r < oh; ++r)
        for (std::size_t c = 0; c < ow; ++c) {
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += taps[t] * horiz(r + t, c);
            out(r, c) = s;
        }
    return out;
}

}  // namespace detail

/// Mean SSIM of two single-channel (h, w) planes over all valid window
/// positions, Gaussian-weighted.
inline double ssim_plane(const Matrix& x, const Matrix& y, const SsimParams& p = {})
{
    if (!x.same_shape(y)) throw ShapeError("ssim: " + x.shape_str() + " vs " + y.shape_str());
    if (x.rows() < p.window || x.cols() < p.window)
        throw ShapeError("ssim: image " + x.shape_str() + " smaller than the " + std::to_string(p.window) + "x" +
                         std::to_string(p.window) + " window");
    const auto taps = gaussian_taps(p.window, p.sigma);
    const Matrix mx = detail::filter_valid(x, taps);
    const Matrix my = detail::filter_valid(y, taps);
    const Matrix exx = detail::filter_valid(hadamard(x, x), taps);
    const Matrix eyy = detail::filter_valid(hadamard(y, y), taps);
    const Matrix exy = detail::filter_valid(hadamard(x, y), taps);
    const double c1 = (p.k1 * p.dynamic_range) * (p.k1 * p.dynamic_range);
    const double c2 = (p.k2 * p.dynamic_range) * (p.k2 * p.dynamic_range);
    double total = 0.0;
    for (std::size_t i = 0; i < mx.size(); ++i) {
        const double ux = mx.data()[i];
        const double uy = my.data()[i];
        const double vx = exx.data()[i] - ux * ux;
        const double vy = eyy.data()[i] - uy * uy;
        const double cxy = exy.data()[i] - ux * uy;
        total += ((2.0 * ux * uy + c1) * (2.0 * cxy + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
    }
    return total / static_cast<double>(mx.size());
}

/// Channel-averaged SSIM.
inline double ssim(const ImageBuffer& pred, const ImageBuffer& ref, const SsimParams& p = {})
{
    if (pred.width != ref.width || pred.height != ref.height || pred.channels != ref.channels)
        throw ShapeError("ssim: image shapes differ");
    double s = 0.0;
    for (std::size_t c = 0; c < ref.channels; ++c) s += ssim_plane(pred.channel(c), ref.channel(c), p);
    return s / static_cast<double>(ref.channels);
}

/// |pred & ref| / |pred | ref| after thresholding both at `threshold`
/// (value >= threshold counts as occupied). Two empty volumes give 1.
inline double iou(std::span<const double> pred, std::span<const double> ref, double threshold = 0.5)
{
    if (pred.size() != ref.size()) throw ShapeError("iou: volume sizes differ");
    std::size_t inter = 0;
    std::size_t uni = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const bool a = pred[i] >= threshold;
        const bool b = ref[i] >= threshold;
        inter += static_cast<std::size_t>(a && b);
        uni += static_cast<std::size_t>(a || b);
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace sl2a
