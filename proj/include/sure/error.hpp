#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sure {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `line()` is 1-based, 0 when not line-specific.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? what + " at line " + std::to_string(line) : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The feasible set of a confidence subproblem is empty.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// Linear system is numerically singular; carries the reciprocal condition estimate.
class SingularSystemError : public Error {
public:
    SingularSystemError(const std::string& what, double rcond)
        : Error(what + " (reciprocal condition estimate " + std::to_string(rcond) + ")"),
          rcond_(rcond) {}
    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace sure
