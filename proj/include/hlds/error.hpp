#pragma once

#include <stdexcept>
#include <string>

namespace hlds {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition (dimension mismatch, bad index).
class ContractError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be positive definite was not.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Invalid model, synthesis or run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or unusable input data (audio, CSV, model files).
class InputError : public Error {
public:
    using Error::Error;
};

/// Class fitting failed (segment too short, degenerate cluster).
class TrainingError : public Error {
public:
    using Error::Error;
};

} // namespace hlds
