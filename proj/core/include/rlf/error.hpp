#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace rlf {

/// Base class for every domain error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition or invariant of a domain type was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The nodal system (or another per-frequency linear solve) is singular.
class SingularError : public Error {
public:
    SingularError(const std::string& what, double frequency_hz, std::string location = {})
        : Error(what), frequency_hz_(frequency_hz), location_(std::move(location)) {}

    [[nodiscard]] double frequency_hz() const noexcept { return frequency_hz_; }
    [[nodiscard]] const std::string& location() const noexcept { return location_; }

private:
    double frequency_hz_;
    std::string location_;
};

/// Malformed text input. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::optional<std::size_t> line = std::nullopt)
        : Error(line ? "line " + std::to_string(*line) + ": " + what : what), line_(line) {}

    [[nodiscard]] std::optional<std::size_t> line() const noexcept { return line_; }

private:
    std::optional<std::size_t> line_;
};

}  // namespace rlf
