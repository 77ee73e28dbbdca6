// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace wishtrack {

// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical failures map to CLI exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public NumericError {
public:
    using NumericError::NumericError;
};
class NonConvergence : public NumericError {
public:
    using NumericError::NumericError;
};
class TailNotDecayed : public NumericError {
public:
    using NumericError::NumericError;
};
class BracketFailure : public NumericError {
public:
    using NumericError::NumericError;
};
class NumericOverflow : public NumericError {
public:
    using NumericError::NumericError;
};
class DegenerateSpectrum : public NumericError {
public:
    using NumericError::NumericError;
};
class RangeSingularity : public NumericError {
public:
    using NumericError::NumericError;
};

// Invalid arguments map to CLI exit code 2.
class UsageError : public Error {
public:
    using Error::Error;
};

class DomainError : public UsageError {
public:
    using UsageError::UsageError;
};
class DimensionMismatch : public UsageError {
public:
    using UsageError::UsageError;
};
class EmptyInput : public UsageError {
public:
    using UsageError::UsageError;
};
class InsufficientSamples : public UsageError {
public:
    using UsageError::UsageError;
};
class DegreesOfFreedomTooSmall : public UsageError {
public:
    using UsageError::UsageError;
};
class ZeroVelocity : public UsageError {
public:
    using UsageError::UsageError;
};
class ConfigError : public UsageError {
public:
    using UsageError::UsageError;
};

}  // namespace wishtrack
