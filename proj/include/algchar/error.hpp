#pragma once

#include <stdexcept>
#include <string>

namespace algchar {

// Bad input: violated preconditions, malformed data, invalid parameters.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input data failed validation (Cartan data, windows, fractions).
class ValidationError : public DomainError {
public:
    using DomainError::DomainError;
};

// The operation is not defined for these operands, e.g. product of two unbounded series.
class UnsupportedOperation : public DomainError {
public:
    using DomainError::DomainError;
};

// A comparison was requested on a region where coefficients are not certified.
class UncertifiedWindow : public DomainError {
public:
    using DomainError::DomainError;
};

// Expanded generators are linearly dependent on the chosen window.
class RankDeficient : public DomainError {
public:
    using DomainError::DomainError;
};

// Broken internal invariant. Seeing this is a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace algchar
