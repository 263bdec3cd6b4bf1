#pragma once

#include <stdexcept>

namespace hetnet {

/// An object that does not exist for the given parameters (e.g. an interior
/// equilibrium outside the positive orthant).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to produce a result (singular system, lost
/// bracket, no exit from a section).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hetnet
