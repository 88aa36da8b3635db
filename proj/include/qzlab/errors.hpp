#pragma once

#include <stdexcept>
#include <string>

namespace qzlab {

// Base for every error the library raises. Numeric failures derive from
// NumericError; configuration failures from ParseError / ValidationError.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public NumericError {
public:
    using NumericError::NumericError;
};

class TruncationError : public NumericError {
public:
    TruncationError(const std::string& what, double captured_norm2)
        : NumericError(what), captured_norm2_(captured_norm2) {}
    double captured_norm2() const noexcept { return captured_norm2_; }

private:
    double captured_norm2_;
};

class ZeroNormError : public NumericError {
public:
    using NumericError::NumericError;
};

class InvalidFactor : public NumericError {
public:
    using NumericError::NumericError;
};

class ApparatusTooSmall : public NumericError {
public:
    using NumericError::NumericError;
};

class DegenerateBranch : public NumericError {
public:
    using NumericError::NumericError;
};

class InvalidState : public NumericError {
public:
    using NumericError::NumericError;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = -1, std::string field = {})
        : Error(what), line_(line), field_(std::move(field)) {}
    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

} // namespace qzlab
