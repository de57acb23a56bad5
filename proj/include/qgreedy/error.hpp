#pragma once

#include <stdexcept>
#include <string>

namespace qgreedy {

// Base of every error raised by the library. The CLI maps subclasses onto
// exit codes, so keep the hierarchy shallow.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class InvalidWeight : public Error {
public:
    using Error::Error;
};

// Raised when a basis fails one of its structural invariants (singular
// vector matrix, biorthogonality, missing duals, degenerate vectors).
class BasisError : public Error {
public:
    using Error::Error;
};

class CombinatorialOverflow : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace qgreedy
