#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stoplab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Expression text could not be parsed.
class ParseError : public Error {
public:
    enum class Kind { syntax, unknown_identifier };

    ParseError(Kind kind, std::size_t offset, const std::string& what)
        : Error(what), kind_(kind), offset_(offset) {}

    Kind kind() const noexcept { return kind_; }
    /// Byte offset into the source text.
    std::size_t offset() const noexcept { return offset_; }

private:
    Kind kind_;
    std::size_t offset_;
};

/// A field or expression could not be evaluated at (t, x).
class EvalError : public Error {
public:
    EvalError(double t, double x, std::size_t offset, const std::string& what)
        : Error(what), t_(t), x_(x), offset_(offset) {}

    double t() const noexcept { return t_; }
    double x() const noexcept { return x_; }
    /// Offset of the offending node in the expression source, when known.
    std::size_t offset() const noexcept { return offset_; }

private:
    double t_, x_;
    std::size_t offset_;
};

class ValidationError : public Error {
public:
    ValidationError(double t, double x, const std::string& what) : Error(what), t_(t), x_(x) {}
    double t() const noexcept { return t_; }
    double x() const noexcept { return x_; }

private:
    double t_, x_;
};

class ReductionError : public Error {
public:
    ReductionError(double t, double x, const std::string& what) : Error(what), t_(t), x_(x) {}
    double t() const noexcept { return t_; }
    double x() const noexcept { return x_; }

private:
    double t_, x_;
};

class NumericalError : public Error {
public:
    NumericalError(double t, double x, const std::string& what) : Error(what), t_(t), x_(x) {}
    double t() const noexcept { return t_; }
    double x() const noexcept { return x_; }

private:
    double t_, x_;
};

class SolverError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::size_t line, const std::string& what) : Error(what), line_(line) {}
    /// 1-based line number, 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace stoplab
