#pragma once

#include <stdexcept>
#include <string>

namespace qvertex {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Non-finite entries or a structurally invalid value.
class ValidationError : public Error {
  public:
    using Error::Error;
};

class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Raised by solve() when elimination meets a pivot below threshold.
class SingularityError : public Error {
  public:
    SingularityError(const std::string& what, double pivot)
        : Error(what), pivot_(pivot) {}

    double pivot() const noexcept { return pivot_; }

  private:
    double pivot_;
};

/// (A, B) does not define a self-adjoint vertex.
class AdmissibilityError : public Error {
  public:
    using Error::Error;
};

/// Case parameters violate the constraints of their template.
class ParameterError : public Error {
  public:
    using Error::Error;
};

class UnsupportedCaseError : public Error {
  public:
    using Error::Error;
};

class IndexError : public Error {
  public:
    using Error::Error;
};

/// Malformed filter specification.
class SpecError : public Error {
  public:
    using Error::Error;
};

/// File I/O failure, including a refused overwrite.
class FileError : public Error {
  public:
    using Error::Error;
};

/// Input text could not be parsed; carries a 1-based position.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace qvertex
