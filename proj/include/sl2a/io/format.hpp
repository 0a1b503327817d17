#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "sl2a/numerics/errors.hpp"

namespace sl2a {

/// Shortest decimal that round-trips to the same double. Identical input
/// gives identical text on every platform.
inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc()) throw Error("format_number: conversion failed");
    return {buf, res.ptr};
}

inline double parse_number(const std::string& s, std::size_t offset = 0)
{
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError("bad number '" + s + "'", offset);
    return v;
}

}  // namespace sl2a
