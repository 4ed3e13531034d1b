#pragma once

#include <stdexcept>
#include <string>

namespace homcover {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (dimension mismatch, bad ranges, schema errors).
class InputError : public Error {
public:
    using Error::Error;
};

/// A numerical routine could not produce a trustworthy answer.
class NumericFailure : public Error {
public:
    using Error::Error;
};

class InradiusZero : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

/// Rejection sampling acceptance rate fell below the configured floor.
class RejectionTooSlow : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

class NetTooLarge : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

/// The patch phase of the cube covering ran out of ratio indices.
class PatchDeficit : public NumericFailure {
public:
    using NumericFailure::NumericFailure;
};

class Unsupported : public InputError {
public:
    using InputError::InputError;
};

class ConversionRequiresCertificate : public InputError {
public:
    using InputError::InputError;
};

}  // namespace homcover
