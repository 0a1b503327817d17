#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sl2a {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid or inconsistent configuration (unknown tag, bad rank, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// NaN/Inf produced or consumed.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// API called out of order, e.g. backward without a cached forward.
class UsageError : public Error {
public:
    using Error::Error;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents. Carries the byte offset where parsing failed.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace sl2a
