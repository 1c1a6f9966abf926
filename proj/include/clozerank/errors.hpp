// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace clozerank {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller violated an operation precondition (bad argument, key-set
/// mismatch, empty input, ...).
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// Input files or wire payloads failed cross-validation. The message names
/// the offending identifier and, where available, file and line.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A backend response could not be parsed into the expected answer grammar.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A token could not be masked (not found, or only overlapping occurrences
/// remain). Carries the token in the message.
class MaskingError : public InvalidInputError {
public:
    using InvalidInputError::InvalidInputError;
};

/// Transport or service failure talking to a model backend.
class BackendError : public Error {
public:
    BackendError(const std::string& what, bool retryable, int status = 0)
        : Error(what), retryable(retryable), status(status) {}

    bool retryable;
    int status;  // HTTP status when applicable, 0 otherwise
};

/// Bad backend / CLI configuration (missing credential, unreadable config,
/// unknown role).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace clozerank
