#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "sl2a/numerics/errors.hpp"
#include "sl2a/numerics/image.hpp"

namespace sl2a {

// Netpbm graymap/pixmap support.
//
// Reads P2 (ASCII gray), P3 (ASCII RGB), P5 (binary gray) and P6 (binary
// RGB) with maxval 1..65535; binary samples wider than 8 bits are big-endian,
// as the format requires. Values are scaled to [0, 1] by dividing by maxval.
// Writes P5/P6 with maxval 255 (8-bit) or 65535 (16-bit), each value rounded
// to the nearest lattice point after clamping to [0, 1].

namespace detail {

class PnmReader {
public:
    explicit PnmReader(std::vector<unsigned char> bytes) : bytes_(std::move(bytes)) {}

    std::size_t offset() const { return pos_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError("netpbm: " + what, pos_); }

    void skip_space_and_comments()
    {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::uint64_t read_uint(const char* field)
    {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail(std::string("expected ") + field);
        std::uint64_t v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + static_cast<std::uint64_t>(bytes_[pos_] - '0');
            if (v > (1ULL << 32)) fail(std::string(field) + " too large");
            ++pos_;
        }
        return v;
    }

    /// After maxval exactly one whitespace byte separates the header from the raster.
    void expect_single_space()
    {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail("expected whitespace after header");
        ++pos_;
    }

    unsigned char byte()
    {
        if (pos_ >= bytes_.size()) fail("unexpected end of data");
        return bytes_[pos_++];
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    std::vector<unsigned char> bytes_;
    std::size_t pos_ = 0;
};

inline std::vector<unsigned char> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::filesystem::path& path, const std::string& bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace detail

/// Parses a Netpbm P2/P3/P5/P6 byte stream.
inline ImageBuffer decode_pnm(std::vector<unsigned char> bytes)
{
    detail::PnmReader r(std::move(bytes));
    if (r.remaining() < 2) r.fail("file too short for a magic number");
    const unsigned char p = r.byte();
    const unsigned char kind = r.byte();
    if (p != 'P' || (kind != '2' && kind != '3' && kind != '5' && kind != '6')) {
        throw ParseError("netpbm: unsupported magic number (expected P2, P3, P5 or P6)", 0);
    }
    const bool ascii = kind == '2' || kind == '3';
    const std::size_t channels = (kind == '3' || kind == '6') ? 3 : 1;
    const std::uint64_t width = r.read_uint("width");
    const std::uint64_t height = r.read_uint("height");
    const std::uint64_t maxval = r.read_uint("maxval");
    if (width == 0 || height == 0) r.fail("zero image dimension");
    if (maxval == 0 || maxval > 65535) r.fail("maxval must be in 1..65535");
    if (width * height > (1ULL << 28)) r.fail("image too large");

    ImageBuffer img(width, height, channels);
    const double inv = 1.0 / static_cast<double>(maxval);
    if (ascii) {
        for (double& v : img.values) {
            const std::uint64_t s = r.read_uint("sample");
            if (s > maxval) r.fail("sample exceeds maxval");
            v = static_cast<double>(s) * inv;
        }
        return img;
    }
    r.expect_single_space();
    const std::size_t bytes_per = maxval > 255 ? 2 : 1;
    if (r.remaining() < img.values.size() * bytes_per) r.fail("raster truncated");
    for (double& v : img.values) {
        std::uint64_t s = r.byte();
        if (bytes_per == 2) s = (s << 8) | r.byte();
        if (s > maxval) r.fail("sample exceeds maxval");
        v = static_cast<double>(s) * inv;
    }
    return img;
}

inline ImageBuffer load_image(const std::filesystem::path& path)
{
    try {
        return decode_pnm(detail::read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.offset());
    }
}

/// Binary P5 (1 channel) or P6 (3 channels) at 8 or 16 bits per sample.
inline std::string encode_pnm(const ImageBuffer& img, int bit_depth = 16)
{
    if (bit_depth != 8 && bit_depth != 16) throw ConfigError("encode_pnm: bit depth must be 8 or 16");
    if (img.channels != 1 && img.channels != 3) throw ShapeError("encode_pnm: 1 or 3 channels required");
    if (img.empty()) throw ShapeError("encode_pnm: empty image");
    const unsigned maxval = bit_depth == 8 ? 255u : 65535u;
    std::string out = (img.channels == 1 ? "P5\n" : "P6\n") + std::to_string(img.width) + " " +
                      std::to_string(img.height) + "\n" + std::to_string(maxval) + "\n";
    out.reserve(out.size() + img.values.size() * (bit_depth / 8));
    for (double v : img.values) {
        const double c = std::isfinite(v) ? std::clamp(v, 0.0, 1.0) : 0.0;
        const auto s = static_cast<unsigned>(std::lround(c * maxval));
        if (bit_depth == 16) out.push_back(static_cast<char>(s >> 8));
        out.push_back(static_cast<char>(s & 0xFF));
    }
    return out;
}

inline void save_image(const ImageBuffer& img, const std::filesystem::path& path, int bit_depth = 16)
{
    detail::write_file(path, encode_pnm(img, bit_depth));
}

}  // namespace sl2a
