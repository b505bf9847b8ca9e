#pragma once

#include <stdexcept>
#include <string>

namespace magic {

// Base class for all library errors so callers can catch one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input text (mapping files, netlists, parameter files).
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally well-formed input that violates a program/parameter invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Row-voltage solver failed to converge within the iteration budget.
class SolverError : public Error {
public:
    using Error::Error;
};

// Calibration target unreachable (e.g. sub-threshold drive).
class CalibrationError : public Error {
public:
    using Error::Error;
};

// File system failures (missing file, unwritable output).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace magic
