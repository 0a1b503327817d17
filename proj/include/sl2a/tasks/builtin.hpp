#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "sl2a/numerics/image.hpp"

namespace sl2a {

/// Binary or scalar 3-D grid; value (x, y, z) at index (z * ny + y) * nx + x.
struct VolumeGrid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::size_t nz = 0;
    std::vector<double> values;

    VolumeGrid() = default;
    VolumeGrid(std::size_t x, std::size_t y, std::size_t z, double fill = 0.0)
        : nx(x), ny(y), nz(z), values(x * y * z, fill) {}

    std::size_t size() const { return values.size(); }
    double& at(std::size_t x, std::size_t y, std::size_t z) { return values[(z * ny + y) * nx + x]; }
    double at(std::size_t x, std::size_t y, std::size_t z) const { return values[(z * ny + y) * nx + x]; }
};

namespace builtin {

inline double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

/// Normalised pixel-centre coordinate in [-1, 1].
inline double centre(std::size_t i, std::size_t side)
{
    return (2.0 * static_cast<double>(i) + 1.0) / static_cast<double>(side) - 1.0;
}

inline ImageBuffer checkerboard(std::size_t size, std::size_t cell = 8)
{
    ImageBuffer img(size, size, 1);
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c) img.at(r, c, 0) = ((r / cell + c / cell) % 2) ? 0.9 : 0.1;
    return img;
}

inline ImageBuffer gradient(std::size_t size)
{
    ImageBuffer img(size, size, 1);
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c)
            img.at(r, c, 0) = clamp01(0.5 + 0.25 * centre(c, size) + 0.2 * std::sin(1.5 * centre(r, size)));
    return img;
}

inline ImageBuffer stripes(std::size_t size, double period_px = 3.0)
{
    ImageBuffer img(size, size, 1);
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c)
            img.at(r, c, 0) =
                0.5 + 0.4 * std::sin(2.0 * std::numbers::pi * static_cast<double>(c + r / 2) / period_px);
    return img;
}

/// RGB test card: a checkerboard quadrant, a smooth colour gradient quadrant
/// and a bottom half of fine stripes whose period shrinks from 6 to 2 px.
inline ImageBuffer composite(std::size_t size)
{
    ImageBuffer img(size, size, 3);
    const std::size_t half = size / 2;
    const std::size_t cell = std::max<std::size_t>(1, size / 16);
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = 0; c < size; ++c) {
            const double x = centre(c, size);
            const double y = centre(r, size);
            std::array<double, 3> rgb{};
            if (r < half && c < half) {
                const bool on = ((r / cell + c / cell) % 2) != 0;
                rgb = on ? std::array<double, 3>{0.95, 0.85, 0.2} : std::array<double, 3>{0.1, 0.15, 0.45};
            } else if (r < half) {
                rgb = {clamp01(0.5 + 0.45 * x), clamp01(0.5 - 0.45 * y), clamp01(0.3 + 0.3 * x * y + 0.2)};
            } else {
                const double t = static_cast<double>(c) / static_cast<double>(size);
                const double period = 6.0 - 4.0 * t;
                const double phase = 2.0 * std::numbers::pi * static_cast<double>(c) / period;
                const double s = 0.5 + 0.45 * std::sin(phase + 0.3 * static_cast<double>(r));
                rgb = {s, clamp01(0.6 * s + 0.3 * (1.0 - t)), clamp01(1.0 - s)};
            }
            for (std::size_t ch = 0; ch < 3; ++ch) img.at(r, c, ch) = rgb[ch];
        }
    }
    return img;
}

/// RGB chirped rings, cos(k r^2), plus a colour tint.
inline ImageBuffer zoneplate(std::size_t size)
{
    ImageBuffer img(size, size, 3);
    const double k = 0.35 * std::numbers::pi * static_cast<double>(size) / 4.0;
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c) {
            const double x = centre(c, size);
            const double y = centre(r, size);
            const double v = 0.5 + 0.45 * std::cos(k * (x * x + y * y));
            img.at(r, c, 0) = v;
            img.at(r, c, 1) = clamp01(0.8 * v + 0.1 * (x + 1.0));
            img.at(r, c, 2) = clamp01(1.0 - v * (0.5 + 0.25 * (y + 1.0)));
        }
    return img;
}

/// RGB soft Gaussian blobs over hard-edged disks and a diagonal bar.
inline ImageBuffer blobs(std::size_t size)
{
    ImageBuffer img(size, size, 3);
    struct Blob {
        double x, y, s;
        std::array<double, 3> rgb;
    };
    const std::array<Blob, 4> soft{{{-0.5, -0.4, 0.25, {0.9, 0.2, 0.1}},
                                    {0.45, -0.5, 0.18, {0.1, 0.8, 0.3}},
                                    {0.1, 0.35, 0.3, {0.2, 0.3, 0.9}},
                                    {-0.6, 0.6, 0.12, {0.8, 0.8, 0.1}}}};
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c) {
            const double x = centre(c, size);
            const double y = centre(r, size);
            std::array<double, 3> v{0.05, 0.05, 0.08};
            for (const auto& b : soft) {
                const double w = std::exp(-((x - b.x) * (x - b.x) + (y - b.y) * (y - b.y)) / (2.0 * b.s * b.s));
                for (std::size_t ch = 0; ch < 3; ++ch) v[ch] += w * b.rgb[ch];
            }
            if ((x - 0.55) * (x - 0.55) + (y - 0.45) * (y - 0.45) < 0.06) v = {0.95, 0.95, 0.95};
            if (std::abs(x + y) < 0.06) v = {0.0, 0.0, 0.0};
            for (std::size_t ch = 0; ch < 3; ++ch) img.at(r, c, ch) = clamp01(v[ch]);
        }
    return img;
}

/// Shepp-Logan-style head phantom (modified contrast), grayscale in [0, 1].
inline ImageBuffer shepp_logan(std::size_t size)
{
    struct Ellipse {
        double intensity, a, b, x0, y0, phi_deg;
    };
    static constexpr std::array<Ellipse, 10> kEllipses{{
        {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
        {-0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0},
        {-0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0},
        {-0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0},
        {0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0},
        {0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0},
        {0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0},
        {0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0},
        {0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0},
    }};
    ImageBuffer img(size, size, 1);
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c) {
            const double x = centre(c, size);
            const double y = -centre(r, size);
            double v = 0.0;
            for (const auto& e : kEllipses) {
                const double phi = e.phi_deg * std::numbers::pi / 180.0;
                const double dx = x - e.x0;
                const double dy = y - e.y0;
                const double u = dx * std::cos(phi) + dy * std::sin(phi);
                const double w = -dx * std::sin(phi) + dy * std::cos(phi);
                if ((u * u) / (e.a * e.a) + (w * w) / (e.b * e.b) <= 1.0) v += e.intensity;
            }
            img.at(r, c, 0) = clamp01(v);
        }
    return img;
}

/// Isotropic Gaussian centred on the grid, exp(-r^2 / (2 sigma^2)) with r in pixels.
inline ImageBuffer gaussian_phantom(std::size_t size, double sigma_px)
{
    ImageBuffer img(size, size, 1);
    const double mid = (static_cast<double>(size) - 1.0) / 2.0;
    for (std::size_t r = 0; r < size; ++r)
        for (std::size_t c = 0; c < size; ++c) {
            const double dx = static_cast<double>(c) - mid;
            const double dy = static_cast<double>(r) - mid;
            img.at(r, c, 0) = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma_px * sigma_px));
        }
    return img;
}

/// Voxel-centre occupancy of a centred ball of the given radius in [-1, 1]^3.
inline VolumeGrid sphere(std::size_t size, double radius = 0.5)
{
    VolumeGrid g(size, size, size);
    for (std::size_t z = 0; z < size; ++z)
        for (std::size_t y = 0; y < size; ++y)
            for (std::size_t x = 0; x < size; ++x) {
                const double px = centre(x, size);
                const double py = centre(y, size);
                const double pz = centre(z, size);
                g.at(x, y, z) = (px * px + py * py + pz * pz <= radius * radius) ? 1.0 : 0.0;
            }
    return g;
}

/// Torus around the z axis with major radius R and tube radius r.
inline VolumeGrid torus(std::size_t size, double major = 0.55, double minor = 0.22)
{
    VolumeGrid g(size, size, size);
    for (std::size_t z = 0; z < size; ++z)
        for (std::size_t y = 0; y < size; ++y)
            for (std::size_t x = 0; x < size; ++x) {
                const double px = centre(x, size);
                const double py = centre(y, size);
                const double pz = centre(z, size);
                const double q = std::sqrt(px * px + py * py) - major;
                g.at(x, y, z) = (q * q + pz * pz <= minor * minor) ? 1.0 : 0.0;
            }
    return g;
}

inline ImageBuffer image(std::string_view name, std::size_t size)
{
    if (name == "checkerboard") return checkerboard(size);
    if (name == "gradient") return gradient(size);
    if (name == "stripes") return stripes(size);
    if (name == "composite") return composite(size);
    if (name == "zoneplate") return zoneplate(size);
    if (name == "blobs") return blobs(size);
    if (name == "shepp-logan") return shepp_logan(size);
    throw ConfigError("unknown built-in image '" + std::string(name) +
                      "' (checkerboard, gradient, stripes, composite, zoneplate, blobs, shepp-logan)");
}

inline VolumeGrid volume(std::string_view name, std::size_t size)
{
    if (name == "sphere") return sphere(size);
    if (name == "torus") return torus(size);
    throw ConfigError("unknown built-in volume '" + std::string(name) + "' (sphere, torus)");
}

}  // namespace builtin
}  // namespace sl2a
