#pragma once

#include <stdexcept>
#include <string>

namespace rum {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Ill-formed inputs: mismatched group specs, wrong dimensions, empty matrices.
class StructuralError : public Error {
public:
    using Error::Error;
};

// A numerical precondition failed: non-unitary, non-commuting, torsion drift.
class ContractError : public Error {
public:
    using Error::Error;
};

// The call is valid in general but not for these arguments (wrong rank,
// window too small, real-part decomposition of complex data, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

// A constraint functional cannot be formed (coincident points, zero bar
// vector, non-smooth point of the norm).
class DegenerateConstraintError : public Error {
public:
    using Error::Error;
};

// Input data fails validation (framework file schema, non-free action,
// incomplete orbits).
class ValidationError : public Error {
public:
    using Error::Error;
};

}  // namespace rum
