#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "sl2a/numerics/matrix.hpp"

namespace sl2a {

/// Parallel-beam Radon transform of a square image, precomputed as a sparse
/// matrix.
///
/// Geometry, all in pixel units: pixel (r, c) has its centre at
/// x = c - (S-1)/2, y = (S-1)/2 - r. Detector bin k sits at offset
/// t = k - (B-1)/2. The ray for angle theta and offset t is
/// t (cos theta, sin theta) + s (-sin theta, cos theta); it is sampled every
/// `step` pixels in s, the image is read by bilinear interpolation with zeros
/// outside the grid, and each sample contributes its weight times `step`.
/// Angles are a * pi / A for a = 0..A-1.
class RadonOperator {
public:
    RadonOperator(std::size_t side, std::size_t num_angles, std::size_t num_bins = 0, double step = 0.5)
        : side_(side), num_bins_(num_bins == 0 ? side : num_bins), step_(step)
    {
        if (side == 0 || num_angles == 0) throw ConfigError("RadonOperator: empty geometry");
        if (!(step > 0.0 && step <= 0.5)) throw ConfigError("RadonOperator: sampling step must be in (0, 0.5]");
        for (std::size_t a = 0; a < num_angles; ++a)
            angles_.push_back(std::numbers::pi * static_cast<double>(a) / static_cast<double>(num_angles));
        build();
    }

    std::size_t side() const { return side_; }
    std::size_t num_angles() const { return angles_.size(); }
    std::size_t num_bins() const { return num_bins_; }
    const std::vector<double>& angles() const { return angles_; }
    std::size_t measurement_count() const { return angles_.size() * num_bins_; }
    std::size_t nonzeros() const { return weights_.size(); }

    /// (S, S) image -> (angles, bins) sinogram.
    Matrix forward(const Matrix& image) const
    {
        if (image.rows() != side_ || image.cols() != side_)
            throw ShapeError("radon_forward: image " + image.shape_str() + " does not match grid side " +
                             std::to_string(side_));
        Matrix sino(num_angles(), num_bins_);
        apply(image.data(), sino.data());
        return sino;
    }

    /// (angles, bins) sinogram -> (S, S) back-projection, the exact transpose of forward().
    Matrix adjoint(const Matrix& sinogram) const
    {
        if (sinogram.rows() != num_angles() || sinogram.cols() != num_bins_)
            throw ShapeError("radon adjoint: sinogram " + sinogram.shape_str() + " does not match geometry");
        Matrix image(side_, side_);
        apply_adjoint(sinogram.data(), image.data());
        return image;
    }

    /// Flat-vector forms: S*S values in row-major order <-> A*B values.
    void apply(std::span<const double> image, std::span<double> sino) const
    {
        for (std::size_t row = 0; row + 1 < row_ptr_.size(); ++row) {
            double s = 0.0;
            for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) s += weights_[k] * image[cols_[k]];
            sino[row] = s;
        }
    }

    void apply_adjoint(std::span<const double> sino, std::span<double> image) const
    {
        std::fill(image.begin(), image.end(), 0.0);
        for (std::size_t row = 0; row + 1 < row_ptr_.size(); ++row) {
            const double g = sino[row];
            for (std::size_t k = row_ptr_[row]; k < row_ptr_[row + 1]; ++k) image[cols_[k]] += weights_[k] * g;
        }
    }

private:
    void build()
    {
        const double S = static_cast<double>(side_);
        const double mid = (S - 1.0) / 2.0;
        const double bin_mid = (static_cast<double>(num_bins_) - 1.0) / 2.0;
        // Half-length of the sampled segment: covers the grid diagonal plus the
        // one-pixel bilinear apron, rounded to a whole number of steps.
        const double reach = std::ceil((S / std::numbers::sqrt2 + 1.0) / step_) * step_;
        const auto samples = static_cast<std::size_t>(std::llround(2.0 * reach / step_)) + 1;

        std::vector<std::pair<std::size_t, double>> entries;
        row_ptr_.push_back(0);
        for (double theta : angles_) {
            const double ct = std::cos(theta);
            const double st = std::sin(theta);
            for (std::size_t k = 0; k < num_bins_; ++k) {
                const double t = static_cast<double>(k) - bin_mid;
                entries.clear();
                for (std::size_t j = 0; j < samples; ++j) {
                    const double s = -reach + step_ * static_cast<double>(j);
                    const double x = t * ct - s * st;
                    const double y = t * st + s * ct;
                    const double cf = x + mid;
                    const double rf = mid - y;
                    const double c0 = std::floor(cf);
                    const double r0 = std::floor(rf);
                    const double fx = cf - c0;
                    const double fy = rf - r0;
                    const auto ci = static_cast<long long>(c0);
                    const auto ri = static_cast<long long>(r0);
                    auto add = [&](long long r, long long c, double w) {
                        if (w == 0.0 || r < 0 || c < 0 || r >= static_cast<long long>(side_) ||
                            c >= static_cast<long long>(side_))
                            return;
                        entries.emplace_back(static_cast<std::size_t>(r) * side_ + static_cast<std::size_t>(c), w * step_);
                    };
                    add(ri, ci, (1.0 - fx) * (1.0 - fy));
                    add(ri, ci + 1, fx * (1.0 - fy));
                    add(ri + 1, ci, (1.0 - fx) * fy);
                    add(ri + 1, ci + 1, fx * fy);
                }
                std::stable_sort(entries.begin(), entries.end(),
                                 [](const auto& a, const auto& b) { return a.first < b.first; });
                for (std::size_t e = 0; e < entries.size();) {
                    const std::size_t col = entries[e].first;
                    double w = 0.0;
                    for (; e < entries.size() && entries[e].first == col; ++e) w += entries[e].second;
                    cols_.push_back(col);
                    weights_.push_back(w);
                }
                row_ptr_.push_back(cols_.size());
            }
        }
    }

    std::size_t side_;
    std::size_t num_bins_;
    double step_;
    std::vector<double> angles_;
    std::vector<std::size_t> row_ptr_;
    std::vector<std::size_t> cols_;
    std::vector<double> weights_;
};

inline Matrix radon_forward(const RadonOperator& op, const Matrix& image) { return op.forward(image); }

}  // namespace sl2a
