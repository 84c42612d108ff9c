#pragma once

#include <stdexcept>
#include <string>

namespace metazeta {

// Base of every error thrown by the library. The CLI maps these to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (pole, cutoff, U range).
class DomainError : public Error {
public:
    using Error::Error;
};

// Requested precision or height is beyond what the evaluator can deliver.
class CapabilityError : public Error {
public:
    using Error::Error;
};

// A query or iterate left the tabulated range of a ladder.
class RangeError : public DomainError {
public:
    using DomainError::DomainError;
};

// Invalid configuration or usage (bad strips, empty U-set, malformed script).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Internal inconsistency that should be numerically impossible.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// The ladder anchor leaves phi(t) >= t somewhere on the table.
class AnchorError : public Error {
public:
    using Error::Error;
};

// No mean-value point could be bracketed, or a certificate is degenerate.
class CertificateError : public Error {
public:
    using Error::Error;
};

class DegeneratePointError : public CertificateError {
public:
    using CertificateError::CertificateError;
};

// A graft target landed exactly on 0 or 1.
class DegenerateTargetError : public DomainError {
public:
    using DomainError::DomainError;
};

// Graft search exhausted its window.
class NotFoundError : public Error {
public:
    using Error::Error;
};

// Meta-equation assembly: missing or stale bindings.
class AssemblyError : public Error {
public:
    using Error::Error;
};

class StaleBindingError : public AssemblyError {
public:
    using AssemblyError::AssemblyError;
};

// Symbolic engine failures (elimination, substitution, evaluation).
class SymbolicError : public Error {
public:
    using Error::Error;
};

}  // namespace metazeta
