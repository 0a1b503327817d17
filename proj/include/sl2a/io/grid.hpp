#pragma once

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "sl2a/io/pnm.hpp"
#include "sl2a/numerics/image.hpp"
#include "sl2a/tasks/builtin.hpp"

namespace sl2a {

// Grid file, version 1. An ASCII header of newline-terminated lines
//
//     sl2a-grid 1
//     dims <n0> [<n1> [<n2>]]
//     dtype u8 | f64
//     encoding binary | text
//     end
//
// followed by prod(dims) samples with axis 0 varying fastest. Binary u8 is
// one byte per sample, binary f64 is IEEE-754 binary64 little-endian. Text is
// whitespace-separated decimal numbers. u8 samples must be 0 or 1 in occupancy
// use but are otherwise read as their integer value.
struct GridData {
    std::vector<std::size_t> dims;
    std::vector<double> values;

    std::size_t count() const
    {
        std::size_t n = 1;
        for (std::size_t d : dims) n *= d;
        return n;
    }
};

namespace detail {

class GridHeaderReader {
public:
    explicit GridHeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }

    std::string line()
    {
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
        if (pos_ >= bytes_.size()) throw ParseError("grid: header line not terminated", start);
        std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(start),
                      bytes_.begin() + static_cast<std::ptrdiff_t>(pos_));
        ++pos_;
        line_start_ = start;
        return s;
    }

    std::size_t line_start() const { return line_start_; }

private:
    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 0;
    std::size_t line_start_ = 0;
};

inline std::vector<std::string> split_words(const std::string& s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string w; is >> w;) out.push_back(w);
    return out;
}

}  // namespace detail

inline GridData decode_grid(const std::vector<unsigned char>& bytes)
{
    detail::GridHeaderReader r(bytes);
    auto expect = [&](const std::string& key) {
        auto words = detail::split_words(r.line());
        if (words.empty() || words[0] != key) throw ParseError("grid: expected '" + key + "' line", r.line_start());
        words.erase(words.begin());
        return words;
    };

    const auto magic = expect("sl2a-grid");
    if (magic.size() != 1 || magic[0] != "1") throw ParseError("grid: unsupported version", r.line_start());

    GridData g;
    const auto dims = expect("dims");
    if (dims.empty() || dims.size() > 3) throw ParseError("grid: 1 to 3 dims required", r.line_start());
    for (const auto& d : dims) {
        std::size_t v = 0;
        const auto res = std::from_chars(d.data(), d.data() + d.size(), v);
        if (res.ec != std::errc() || res.ptr != d.data() + d.size() || v == 0)
            throw ParseError("grid: bad dimension '" + d + "'", r.line_start());
        g.dims.push_back(v);
    }
    if (g.count() > (1ULL << 30)) throw ParseError("grid: too many samples", r.line_start());

    const auto dtype = expect("dtype");
    if (dtype.size() != 1 || (dtype[0] != "u8" && dtype[0] != "f64"))
        throw ParseError("grid: dtype must be u8 or f64", r.line_start());
    const auto enc = expect("encoding");
    if (enc.size() != 1 || (enc[0] != "binary" && enc[0] != "text"))
        throw ParseError("grid: encoding must be binary or text", r.line_start());
    if (!expect("end").empty()) throw ParseError("grid: junk after 'end'", r.line_start());

    const std::size_t n = g.count();
    std::size_t pos = r.offset();
    g.values.resize(n);
    if (enc[0] == "binary") {
        const std::size_t width = dtype[0] == "u8" ? 1 : 8;
        if (bytes.size() - pos != n * width)
            throw ParseError("grid: payload holds " + std::to_string(bytes.size() - pos) + " bytes, expected " +
                                 std::to_string(n * width),
                             pos);
        for (std::size_t i = 0; i < n; ++i) {
            if (width == 1) {
                g.values[i] = bytes[pos + i];
            } else {
                std::uint64_t bits = 0;
                for (std::size_t b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[pos + 8 * i + b]) << (8 * b);
                g.values[i] = std::bit_cast<double>(bits);
                if (!std::isfinite(g.values[i])) throw ParseError("grid: non-finite sample", pos + 8 * i);
            }
        }
        return g;
    }
    const char* base = reinterpret_cast<const char*>(bytes.data());
    const char* end = base + bytes.size();
    const char* p = base + pos;
    for (std::size_t i = 0; i < n; ++i) {
        while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
        double v = 0.0;
        const auto res = std::from_chars(p, end, v);
        if (res.ec != std::errc() || !std::isfinite(v))
            throw ParseError("grid: bad text sample " + std::to_string(i), static_cast<std::size_t>(p - base));
        if (dtype[0] == "u8" && (v != std::floor(v) || v < 0.0 || v > 255.0))
            throw ParseError("grid: u8 sample out of range", static_cast<std::size_t>(p - base));
        g.values[i] = v;
        p = res.ptr;
    }
    while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
    if (p != end) throw ParseError("grid: trailing data after samples", static_cast<std::size_t>(p - base));
    return g;
}

inline GridData load_grid(const std::filesystem::path& path)
{
    try {
        return decode_grid(detail::read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.offset());
    }
}

/// Binary encoding; u8 requires every value to be an integer in 0..255.
inline std::string encode_grid(const GridData& g, const std::string& dtype = "f64")
{
    if (g.dims.empty() || g.dims.size() > 3 || g.count() != g.values.size())
        throw ShapeError("encode_grid: dims do not match the value count");
    if (dtype != "u8" && dtype != "f64") throw ConfigError("encode_grid: dtype must be u8 or f64");
    std::string out = "sl2a-grid 1\ndims";
    for (std::size_t d : g.dims) out += " " + std::to_string(d);
    out += "\ndtype " + dtype + "\nencoding binary\nend\n";
    for (double v : g.values) {
        if (dtype == "u8") {
            if (v != std::floor(v) || v < 0.0 || v > 255.0) throw DomainError("encode_grid: value not representable as u8");
            out.push_back(static_cast<char>(static_cast<unsigned char>(v)));
        } else {
            const auto bits = std::bit_cast<std::uint64_t>(v);
            for (std::size_t b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
        }
    }
    return out;
}

inline void save_grid(const GridData& g, const std::filesystem::path& path, const std::string& dtype = "f64")
{
    detail::write_file(path, encode_grid(g, dtype));
}

inline GridData to_grid(const VolumeGrid& v) { return {{v.nx, v.ny, v.nz}, v.values}; }

inline VolumeGrid to_volume(const GridData& g)
{
    if (g.dims.size() != 3) throw ShapeError("grid has " + std::to_string(g.dims.size()) + " dims, volume needs 3");
    VolumeGrid v(g.dims[0], g.dims[1], g.dims[2]);
    v.values = g.values;
    return v;
}

/// Single-channel image: axis 0 is the column, axis 1 the row.
inline GridData to_grid(const ImageBuffer& img)
{
    if (img.channels != 1) throw ShapeError("to_grid: single-channel image required");
    return {{img.width, img.height}, img.values};
}

inline ImageBuffer to_image(const GridData& g)
{
    if (g.dims.size() != 2) throw ShapeError("grid has " + std::to_string(g.dims.size()) + " dims, image needs 2");
    ImageBuffer img(g.dims[0], g.dims[1], 1);
    img.values = g.values;
    return img;
}

}  // namespace sl2a
