#pragma once

#include <stdexcept>
#include <string>

namespace opstable {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent user input (config files, CLI arguments).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// A model constraint is violated (invalid exponent, undefined mean,
/// fullness failure, parameter out of range).
class ModelError : public Error {
public:
    explicit ModelError(const std::string& what) : Error(what) {}
};

/// Centering was requested but the process mean does not exist
/// (some eigenvalue of the exponent has real part >= 1).
class MeanUndefinedError : public ModelError {
public:
    explicit MeanUndefinedError(const std::string& what) : ModelError(what) {}
};

/// The requested operation is not defined for the given spec
/// (e.g. symmetry classification outside d=2, orbits of a uniform measure).
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& what) : Error(what) {}
};

/// Numerical machinery failed to converge (quadrature, root finding,
/// singular linear systems).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

} // namespace opstable
