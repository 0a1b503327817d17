#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>

#include "sl2a/io/format.hpp"
#include "sl2a/io/pnm.hpp"
#include "sl2a/numerics/image.hpp"
#include "sl2a/numerics/matrix.hpp"

namespace sl2a {

/// Five-stop piecewise-linear approximation of viridis, sampled at
/// t = 0, 0.25, 0.5, 0.75, 1.
inline constexpr std::array<std::array<double, 3>, 5> kHeatmapStops{{
    {0.267, 0.005, 0.329},
    {0.229, 0.322, 0.546},
    {0.128, 0.567, 0.551},
    {0.369, 0.789, 0.383},
    {0.993, 0.906, 0.144},
}};

inline std::array<double, 3> heatmap_color(double t)
{
    t = std::clamp(t, 0.0, 1.0);
    const double pos = t * 4.0;
    const auto i = std::min<std::size_t>(3, static_cast<std::size_t>(pos));
    const double f = pos - static_cast<double>(i);
    std::array<double, 3> c{};
    for (std::size_t k = 0; k < 3; ++k) c[k] = kHeatmapStops[i][k] * (1.0 - f) + kHeatmapStops[i + 1][k] * f;
    return c;
}

struct HeatmapOptions {
    std::size_t cell_width = 4;
    std::size_t cell_height = 16;
    std::optional<double> lo;  ///< defaults to the matrix minimum
    std::optional<double> hi;  ///< defaults to the matrix maximum
};

struct Heatmap {
    ImageBuffer image;
    double lo = 0.0;
    double hi = 0.0;
};

/// Renders a (steps, frequencies) table with steps along x (left to right)
/// and one horizontal band per frequency (first column on top).
inline Heatmap render_heatmap(const Matrix& table, const HeatmapOptions& opt = {})
{
    if (table.empty()) throw ShapeError("render_heatmap: empty table");
    if (opt.cell_width == 0 || opt.cell_height == 0) throw ConfigError("render_heatmap: zero cell size");
    Heatmap h;
    const auto [mn, mx] = std::minmax_element(table.data().begin(), table.data().end());
    h.lo = opt.lo.value_or(*mn);
    h.hi = opt.hi.value_or(*mx);
    if (!(h.hi >= h.lo)) throw ConfigError("render_heatmap: empty value range");
    const double span = h.hi - h.lo;
    h.image = ImageBuffer(table.rows() * opt.cell_width, table.cols() * opt.cell_height, 3);
    for (std::size_t s = 0; s < table.rows(); ++s)
        for (std::size_t f = 0; f < table.cols(); ++f) {
            const double t = span > 0.0 ? (table(s, f) - h.lo) / span : 0.0;
            const auto c = heatmap_color(t);
            for (std::size_t y = 0; y < opt.cell_height; ++y)
                for (std::size_t x = 0; x < opt.cell_width; ++x)
                    for (std::size_t k = 0; k < 3; ++k)
                        h.image.at(f * opt.cell_height + y, s * opt.cell_width + x, k) = c[k];
        }
    return h;
}

/// Sidecar text describing the value range and layout of a heatmap.
inline std::string heatmap_sidecar(const Heatmap& h, const Matrix& table, const HeatmapOptions& opt = {})
{
    std::string s = "sl2a-heatmap 1\n";
    s += "range " + format_number(h.lo) + " " + format_number(h.hi) + "\n";
    s += "table_rows " + std::to_string(table.rows()) + " (logged steps, left to right)\n";
    s += "table_cols " + std::to_string(table.cols()) + " (frequencies, top to bottom)\n";
    s += "cell " + std::to_string(opt.cell_width) + "x" + std::to_string(opt.cell_height) + " px\n";
    s += "colormap viridis-5 linear, lo -> t=0, hi -> t=1, values clamped\n";
    for (std::size_t i = 0; i < kHeatmapStops.size(); ++i) {
        s += "stop " + format_number(0.25 * static_cast<double>(i));
        for (double c : kHeatmapStops[i]) s += " " + format_number(c);
        s += "\n";
    }
    return s;
}

/// Writes <stem>.ppm (8-bit) and <stem>.txt.
inline void save_heatmap(const Matrix& table, const std::filesystem::path& stem, const HeatmapOptions& opt = {})
{
    const Heatmap h = render_heatmap(table, opt);
    save_image(h.image, stem.string() + ".ppm", 8);
    detail::write_file(stem.string() + ".txt", heatmap_sidecar(h, table, opt));
}

}  // namespace sl2a
