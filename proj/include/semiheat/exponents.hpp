#pragma once

#include <cmath>
#include <string>

#include "semiheat/errors.hpp"
#include "semiheat/extended_real.hpp"

namespace semiheat {

/// Ambient parameters of every computation: dimension N and exponent p.
struct ProblemParams {
    int dim;
    double p;

    ProblemParams(int dim, double p) : dim(dim), p(p) {
        if (dim < 1) throw DomainError("ProblemParams: dimension must be >= 1");
        if (!(p > 1.0)) throw DomainError("ProblemParams: exponent must be > 1");
    }

    /// 2/(p-1), the decay exponent of the singular steady state.
    double m_p() const { return 2.0 / (p - 1.0); }
};

enum class Regime {
    below_serrin,
    serrin_to_sobolev,
    critical,
    sobolev_to_jl,
    at_or_above_jl,
};

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::below_serrin: return "below_serrin";
        case Regime::serrin_to_sobolev: return "serrin_to_sobolev";
        case Regime::critical: return "critical";
        case Regime::sobolev_to_jl: return "sobolev_to_jl";
        case Regime::at_or_above_jl: return "at_or_above_jl";
    }
    return "?";
}

/// p_sg = N/(N-2) for N >= 3, infinity otherwise.
inline ExtendedReal serrin_exponent(int dim) {
    if (dim < 1) throw DomainError("serrin_exponent: dimension must be >= 1");
    if (dim <= 2) return ExtendedReal::infinity();
    return ExtendedReal(static_cast<double>(dim) / (dim - 2));
}

/// p_S = (N+2)/(N-2) for N >= 3, infinity otherwise.
inline ExtendedReal sobolev_exponent(int dim) {
    if (dim < 1) throw DomainError("sobolev_exponent: dimension must be >= 1");
    if (dim <= 2) return ExtendedReal::infinity();
    return ExtendedReal(static_cast<double>(dim + 2) / (dim - 2));
}

/// p_JL = ((N-2)^2 - 4N + 8 sqrt(N-1)) / ((N-2)(N-10)) for N > 10, infinity otherwise.
inline ExtendedReal joseph_lundgren_exponent(int dim) {
    if (dim < 1) throw DomainError("joseph_lundgren_exponent: dimension must be >= 1");
    if (dim <= 10) return ExtendedReal::infinity();
    const double n = dim;
    const double num = (n - 2) * (n - 2) - 4 * n + 8 * std::sqrt(n - 1);
    const double den = (n - 2) * (n - 10);
    return ExtendedReal(num / den);
}

struct ExponentTable {
    ExtendedReal p_sg;
    ExtendedReal p_S;
    ExtendedReal p_JL;
};

inline ExponentTable exponent_table(int dim) {
    return {serrin_exponent(dim), sobolev_exponent(dim), joseph_lundgren_exponent(dim)};
}

/// Relative tolerance used to detect p == p_S exactly; p_S is typically
/// entered as a rational and must route to the critical-case code paths.
inline constexpr double kCriticalDetectionTol = 1e-12;

inline bool is_critical(const ProblemParams& params, double tol = kCriticalDetectionTol) {
    ExtendedReal ps = sobolev_exponent(params.dim);
    if (!ps.is_finite()) return false;
    return std::abs(params.p - ps.value()) <= tol * ps.value();
}

inline Regime classify_regime(const ProblemParams& params, double critical_tol = kCriticalDetectionTol) {
    const ExponentTable t = exponent_table(params.dim);
    if (is_critical(params, critical_tol)) return Regime::critical;
    if (!(params.p > t.p_sg)) return Regime::below_serrin;
    if (params.p < t.p_S) return Regime::serrin_to_sobolev;
    if (params.p < t.p_JL) return Regime::sobolev_to_jl;
    return Regime::at_or_above_jl;
}

/// Amplitude L of the singular steady state, defined for p > p_sg(N):
/// L^(p-1) = (2/(p-1)) (N - 2 - 2/(p-1)).
inline double singular_amplitude(const ProblemParams& params) {
    const double m = params.m_p();
    const double inner = m * (params.dim - 2 - m);
    if (!(inner > 0.0))
        throw RegimeError("singular_amplitude: no singular steady state for p <= p_sg(N)");
    return std::pow(inner, 1.0 / (params.p - 1.0));
}

/// The singular steady state L r^(-2/(p-1)); singular at the origin.
inline double phi_infinity(const ProblemParams& params, double r) {
    if (!(r > 0.0)) throw DomainError("phi_infinity: r must be > 0");
    return singular_amplitude(params) * std::pow(r, -params.m_p());
}

inline double phi_infinity_derivative(const ProblemParams& params, double r) {
    if (!(r > 0.0)) throw DomainError("phi_infinity_derivative: r must be > 0");
    const double m = params.m_p();
    return -m * singular_amplitude(params) * std::pow(r, -m - 1.0);
}

}  // namespace semiheat
