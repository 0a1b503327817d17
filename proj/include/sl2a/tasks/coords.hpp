#pragma once

#include <cstddef>
#include <vector>

#include "sl2a/numerics/matrix.hpp"

namespace sl2a {

/// Affine map between a grid index and a normalised coordinate on one axis:
/// u = scale * p + offset.
struct AxisMap {
    double scale = 1.0;
    double offset = 0.0;

    double normalize(double p) const { return scale * p + offset; }
    double denormalize(double u) const { return (u - offset) / scale; }

    /// Pixel centres of a `side`-long axis onto [-1, 1]: u = (2p + 1)/side - 1,
    /// so the extreme centres sit at +-(1 - 1/side).
    static AxisMap pixel_centers(std::size_t side)
    {
        const double s = static_cast<double>(side);
        return {2.0 / s, 1.0 / s - 1.0};
    }
};

/// Per-axis normalisation of a regular grid. Axis 0 varies fastest in the
/// flattened sample order (x = column for images).
struct CoordinateMap {
    std::vector<AxisMap> axes;
    std::vector<std::size_t> sides;

    static CoordinateMap pixel_centers(std::vector<std::size_t> sides)
    {
        CoordinateMap m;
        for (std::size_t s : sides) m.axes.push_back(AxisMap::pixel_centers(s));
        m.sides = std::move(sides);
        return m;
    }

    std::size_t dims() const { return axes.size(); }

    std::size_t sample_count() const
    {
        std::size_t n = 1;
        for (std::size_t s : sides) n *= s;
        return n;
    }

    /// One row per grid node, in flattened order.
    Matrix grid() const
    {
        const std::size_t n = sample_count();
        Matrix out(n, dims());
        for (std::size_t row = 0; row < n; ++row) {
            std::size_t rem = row;
            for (std::size_t a = 0; a < dims(); ++a) {
                const std::size_t idx = rem % sides[a];
                rem /= sides[a];
                out(row, a) = axes[a].normalize(static_cast<double>(idx));
            }
        }
        return out;
    }

    Matrix normalize(const Matrix& grid_points) const
    {
        Matrix out = grid_points;
        for (std::size_t r = 0; r < out.rows(); ++r)
            for (std::size_t a = 0; a < dims(); ++a) out(r, a) = axes[a].normalize(grid_points(r, a));
        return out;
    }

    Matrix denormalize(const Matrix& coords) const
    {
        Matrix out = coords;
        for (std::size_t r = 0; r < out.rows(); ++r)
            for (std::size_t a = 0; a < dims(); ++a) out(r, a) = axes[a].denormalize(coords(r, a));
        return out;
    }
};

/// `n` uniformly spaced points on [lo, hi] including both ends, as an (n, 1) matrix.
inline Matrix linspace(double lo, double hi, std::size_t n)
{
    Matrix out(n, 1);
    for (std::size_t i = 0; i < n; ++i)
        out(i, 0) = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

}  // namespace sl2a
