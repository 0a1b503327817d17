#pragma once

#include <cstddef>
#include <vector>

#include "sl2a/numerics/matrix.hpp"

namespace sl2a {

/// Interleaved (row-major, channel-last) image with values nominally in [0, 1].
struct ImageBuffer {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 1;
    std::vector<double> values;

    ImageBuffer() = default;
    ImageBuffer(std::size_t w, std::size_t h, std::size_t c, double fill = 0.0)
        : width(w), height(h), channels(c), values(w * h * c, fill) {}

    std::size_t pixel_count() const { return width * height; }
    bool empty() const { return values.empty(); }

    double& at(std::size_t row, std::size_t col, std::size_t ch) { return values[(row * width + col) * channels + ch]; }
    double at(std::size_t row, std::size_t col, std::size_t ch) const
    {
        return values[(row * width + col) * channels + ch];
    }

    /// (pixels, channels) view, pixels in row-major order.
    Matrix to_matrix() const { return Matrix(pixel_count(), channels, values); }

    static ImageBuffer from_matrix(const Matrix& m, std::size_t w, std::size_t h)
    {
        if (m.rows() != w * h) throw ShapeError("ImageBuffer::from_matrix: row count does not match size");
        ImageBuffer img(w, h, m.cols());
        std::copy(m.data().begin(), m.data().end(), img.values.begin());
        return img;
    }

    /// One channel as a (height, width) matrix.
    Matrix channel(std::size_t ch) const
    {
        Matrix out(height, width);
        for (std::size_t r = 0; r < height; ++r)
            for (std::size_t c = 0; c < width; ++c) out(r, c) = at(r, c, ch);
        return out;
    }
};

}  // namespace sl2a
