#pragma once

#include <stdexcept>
#include <string>

namespace quickim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual or binary input.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    explicit ParseError(const std::string& what) : Error(what), line_(0) {}

    /// 1-based line number, or 0 when not applicable.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A value outside the domain of an operation (bad probability, self-loop, unknown vertex).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An exact computation would exceed its enumeration guard.
class CapacityError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace quickim
