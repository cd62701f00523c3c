#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace snmod {

/// Base for every error the library raises on bad input.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a data contract (unknown node, missing coordinate, ...).
class DataError : public Error {
public:
    using Error::Error;
};

/// Caller passed an argument outside the documented range.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

}  // namespace snmod
