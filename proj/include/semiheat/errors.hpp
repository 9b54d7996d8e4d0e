#pragma once

#include <stdexcept>
#include <string>

namespace semiheat {

/// Bad argument: violates a documented precondition (invalid N, r <= 0, ...).
struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Valid arguments, but the requested object does not exist in this
/// (N, p) regime (e.g. no singular steady state at p <= p_sg).
struct RegimeError : std::domain_error {
    explicit RegimeError(const std::string& what) : std::domain_error(what) {}
};

/// Base for runtime numerical failures; carries no extra state beyond the
/// message so that subcommands can map it to a single exit code.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// ODE integration failed (step underflow, step budget exhausted).
struct IntegrationError : NumericalError {
    IntegrationError(const std::string& what, double last_abscissa)
        : NumericalError(what), last_abscissa(last_abscissa) {}
    double last_abscissa;
};

/// A bracketing search could not locate its target.
struct SearchError : NumericalError {
    explicit SearchError(const std::string& what) : NumericalError(what) {}
};

/// Problem too ill-conditioned to answer honestly (e.g. near-separatrix orbit).
struct ConditioningError : NumericalError {
    explicit ConditioningError(const std::string& what) : NumericalError(what) {}
};

/// Mesh does not satisfy a structural requirement (junction off-node, ...).
struct MeshError : NumericalError {
    explicit MeshError(const std::string& what) : NumericalError(what) {}
};

/// Time step violates the monotonicity restriction.
struct StepError : NumericalError {
    explicit StepError(const std::string& what) : NumericalError(what) {}
};

/// A barrier construction failed one of its build-time checks.
struct ConstructionError : NumericalError {
    explicit ConstructionError(const std::string& what) : NumericalError(what) {}
};

}  // namespace semiheat
