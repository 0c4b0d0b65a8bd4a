#pragma once

#include <stdexcept>
#include <string>

namespace fracmech {

/// Raised when an argument lies outside the domain of a formula
/// (non-positive energies, exponents out of range, singular points).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised when a numerical procedure fails to reach its tolerance
/// (quadrature budget exhausted, root bracket lost, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when the requested physical setup cannot produce the motion a
/// measurement needs (unbounded orbit, collision course).
class UnsuitablePhysics : public std::runtime_error {
public:
    explicit UnsuitablePhysics(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fracmech
