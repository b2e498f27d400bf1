#pragma once

#include <stdexcept>
#include <string>

namespace dickehp {

// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadratic form has a complex, negative or vanishing normal-mode frequency.
class InstabilityError : public Error {
public:
    using Error::Error;
};

// Second moments imply ΔxΔp below the Heisenberg bound.
class UncertaintyViolation : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of a formula.
class DomainError : public Error {
public:
    using Error::Error;
};

// Mean-field branch sign incompatible with the phase.
class BranchError : public Error {
public:
    using Error::Error;
};

class DegenerateFit : public Error {
public:
    using Error::Error;
};

class CutoffError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class MeanFieldError : public Error {
public:
    using Error::Error;
};

// Closed-form asymptotics requested outside their regime of validity.
class RegimeError : public Error {
public:
    using Error::Error;
};

// Malformed or inconsistent sweep configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dickehp
