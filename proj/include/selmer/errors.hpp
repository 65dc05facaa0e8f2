#pragma once

#include <stdexcept>
#include <string>

namespace selmer {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precondition violated by the caller (zero polynomial, non-prime modulus, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A registry entry fails the admissibility checks.
class InvalidFamily : public Error {
public:
    using Error::Error;
};

// A discriminant factor fits none of the admissible multiplicity patterns.
class ClassificationError : public Error {
public:
    using Error::Error;
};

// Isogeny kernel data does not describe a kernel of the domain curve.
class KernelValidationError : public Error {
public:
    using Error::Error;
};

// A computation would exceed a configured size guard.
class ResourceError : public Error {
public:
    using Error::Error;
};

// Too few samples for a statistic to be meaningful.
class SampleError : public Error {
public:
    using Error::Error;
};

// A prediction or formula does not apply to the given input.
class InapplicableError : public Error {
public:
    using Error::Error;
};

// An empirical decision fell inside its uncertainty margin.
class LowConfidenceError : public Error {
public:
    using Error::Error;
};

}  // namespace selmer
