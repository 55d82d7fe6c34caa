#pragma once

#include <stdexcept>
#include <string>

namespace qthermo {

// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A matrix or vector that does not describe a physical qubit state.
class InvalidState : public Error {
public:
    using Error::Error;
};

// Argument outside the domain of a mapping (negative time, p >= 1/2, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// The two states are indistinguishable; no discriminating observable exists.
class DegeneratePair : public Error {
public:
    using Error::Error;
};

}  // namespace qthermo
