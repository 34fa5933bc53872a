#pragma once

#include <stdexcept>
#include <string>

namespace jbt {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A precondition or API contract was violated by the caller.
class ContractError : public Error {
public:
    using Error::Error;
};

/// A numerical computation failed (non-convergence, invalid radicand,
/// an oracle that is not an isometry, ...).
class NumericError : public Error {
public:
    using Error::Error;
};

/// A structural decision could not be made reliably, e.g. a singular value
/// sits within tolerance of a rank cut. Carries the offending spectrum.
class AmbiguityError : public Error {
public:
    using Error::Error;
};

/// Domain and codomain are structurally incompatible (e.g. different rank).
class IncompatibilityError : public Error {
public:
    using Error::Error;
};

/// Synthesis produced an operator that does not reproduce the oracle.
class SynthesisError : public Error {
public:
    using Error::Error;
};

/// Malformed textual input (descriptors, JSON payloads).
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace jbt
