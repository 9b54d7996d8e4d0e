#pragma once

// The cylinder transform v(t) = r^(2/(p-1)) u(r), t = ln r, turning the
// radial steady-state equation into
//   v'' + (N-2-2m) v' - m(N-2-m) v + |v|^(p-1) v = 0,   m = 2/(p-1).
// The damping coefficient vanishes exactly at p = p_S, where the equation
// becomes Hamiltonian with energy
//   E = (v')^2/2 - ((N-2)^2/8) v^2 + ((N-2)/(2N)) v^(2N/(N-2)).

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <memory>
#include <vector>

#include "semiheat/dopri5.hpp"
#include "semiheat/errors.hpp"
#include "semiheat/exponents.hpp"
#include "semiheat/radial_ode.hpp"

namespace semiheat {

enum class OrbitKind { constant, homoclinic, periodic, heteroclinic };

/// Constant equilibrium v* = ((N-2)/2)^((N-2)/2) of the critical equation.
inline double emden_equilibrium(int dim) {
    if (dim < 3) throw DomainError("emden_equilibrium: requires N >= 3");
    return std::pow((dim - 2) / 2.0, (dim - 2) / 2.0);
}

/// Potential W(v) of the critical equation, so that v'' = -W'(v).
inline double emden_potential(int dim, double v) {
    const double n = dim;
    const double q = 2 * n / (n - 2);
    return -(n - 2) * (n - 2) / 8.0 * v * v + (n - 2) / (2 * n) * std::pow(std::abs(v), q);
}

inline double emden_potential_derivative(int dim, double v) {
    const double n = dim;
    const double ps = (n + 2) / (n - 2);
    return -(n - 2) * (n - 2) / 4.0 * v + odd_power(v, ps);
}

/// Conserved energy of the critical equation at p = p_S.
inline double emden_energy(int dim, double v, double v_prime) {
    return 0.5 * v_prime * v_prime + emden_potential(dim, v);
}

/// Explicit even homoclinic of the critical equation:
///   v(t) = (N(N-2))^((N-2)/4) (2 cosh t)^(-(N-2)/2).
inline double homoclinic(int dim, double t) {
    if (dim < 3) throw DomainError("homoclinic: requires N >= 3");
    const double s = (dim - 2) / 2.0;
    const double amp = std::pow(static_cast<double>(dim) * (dim - 2), s / 2.0);
    return amp * std::pow(2.0 * std::cosh(t), -s);
}

inline double homoclinic_derivative(int dim, double t) {
    const double s = (dim - 2) / 2.0;
    return -s * std::tanh(t) * homoclinic(dim, t);
}

/// The homoclinic peak of the transformed regular profile Phi sits at
/// t = (1/2) ln(N(N-2)); translating by this aligns Phi with the even
/// homoclinic centred at 0.
inline double critical_profile_shift(int dim) {
    if (dim < 3) throw DomainError("critical_profile_shift: requires N >= 3");
    return 0.5 * std::log(static_cast<double>(dim) * (dim - 2));
}

/// A trajectory (v, v') of the transformed equation. `energy` is meaningful
/// only at p = p_S (NaN otherwise).
struct CylindricalOrbit {
    ProblemParams params;
    OrbitKind kind;
    std::vector<double> t_grid;
    std::vector<double> v;
    std::vector<double> v_prime;
    double energy = std::numeric_limits<double>::quiet_NaN();

    // Continuous evaluation over [t_grid.front(), t_grid.back()].
    std::function<double(double)> eval;
    std::function<double(double)> eval_derivative;

    double t_min() const { return t_grid.front(); }
    double t_max() const { return t_grid.back(); }

    /// Supremum of v, refined by bisection on v' around the sampled maximum.
    double max_value() const {
        std::size_t best = 0;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] > v[best]) best = i;
        if (best == 0 || best + 1 == v.size()) return v[best];
        double a = t_grid[best - 1], b = t_grid[best + 1];
        double da = eval_derivative(a);
        for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
            const double mid = 0.5 * (a + b);
            const double dm = eval_derivative(mid);
            if ((da > 0) == (dm > 0)) {
                a = mid;
                da = dm;
            } else {
                b = mid;
            }
        }
        return eval(0.5 * (a + b));
    }
};

/// Parameters of a Delaunay orbit: the minimal value m of h and the period T.
/// `phase` locates a minimum of h; by convention the attached orbit has its
/// minimum at t = 0 and the phase is applied when evaluating the profile.
struct DelaunayParams {
    int dim;
    double min_value;
    double period;
    double phase = 0.0;
};

struct DelaunayOrbit {
    DelaunayParams params;
    CylindricalOrbit orbit;

    /// Periodic extension of h.
    double h(double t) const {
        if (orbit.kind == OrbitKind::constant) return orbit.v.front();
        double s = std::fmod(t, params.period);
        if (s < 0) s += params.period;
        return orbit.eval(s);
    }
    double h_derivative(double t) const {
        if (orbit.kind == OrbitKind::constant) return 0.0;
        double s = std::fmod(t, params.period);
        if (s < 0) s += params.period;
        return orbit.eval_derivative(s);
    }
};

/// Transform a positive radial profile into cylinder variables on
/// [t_lo, t_hi] (defaults cover the computed range).
inline CylindricalOrbit cylinder_transform(const RadialProfile& profile,
                                           double t_lo = std::numeric_limits<double>::quiet_NaN(),
                                           double t_hi = std::numeric_limits<double>::quiet_NaN(),
                                           int samples = 2001) {
    const ProblemParams params = profile.params();
    const double m = params.m_p();
    if (std::isnan(t_hi)) t_hi = std::log(profile.r_max() * (1 - 1e-12));
    if (std::isnan(t_lo)) t_lo = std::max(t_hi - 25.0, std::log(1e-3));
    if (!(t_lo < t_hi)) throw DomainError("cylinder_transform: empty t range");
    if (profile.first_root() && *profile.first_root() < std::exp(t_hi))
        throw DomainError("cylinder_transform: profile is nonpositive inside the range");

    CylindricalOrbit orb{params, OrbitKind::homoclinic, {}, {}, {}};
    orb.t_grid.resize(samples);
    orb.v.resize(samples);
    orb.v_prime.resize(samples);

    // Keep the profile alive inside the evaluators.
    auto prof = std::make_shared<RadialProfile>(profile);
    orb.eval = [prof, m](double t) {
        const double r = std::exp(t);
        return std::pow(r, m) * prof->value(r);
    };
    orb.eval_derivative = [prof, m](double t) {
        const double r = std::exp(t);
        return std::pow(r, m) * (m * prof->value(r) + r * prof->derivative(r));
    };

    for (int i = 0; i < samples; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
        orb.t_grid[i] = t;
        orb.v[i] = orb.eval(t);
        orb.v_prime[i] = orb.eval_derivative(t);
        if (!(orb.v[i] > 0))
            throw DomainError("cylinder_transform: nonpositive profile value in range");
    }
    if (is_critical(params)) orb.energy = emden_energy(params.dim, orb.v[0], orb.v_prime[0]);
    return orb;
}

namespace detail {

inline void critical_rhs(int dim, double, const ode::State<2>& y, ode::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = -emden_potential_derivative(dim, y[0]);
}

/// Shared construction of an orbit backed by a dense ODE solution.
inline CylindricalOrbit orbit_from_dense(ProblemParams params, OrbitKind kind,
                                         std::shared_ptr<ode::DenseSolution<2>> sol, double t_lo,
                                         double t_hi, int samples) {
    CylindricalOrbit orb{params, kind, {}, {}, {}};
    orb.eval = [sol](double t) { return sol->eval_component(t, 0); };
    orb.eval_derivative = [sol](double t) { return sol->eval_component(t, 1); };
    orb.t_grid.resize(samples);
    orb.v.resize(samples);
    orb.v_prime.resize(samples);
    for (int i = 0; i < samples; ++i) {
        const double t = t_lo + (t_hi - t_lo) * i / (samples - 1);
        ode::State<2> y;
        sol->eval(t, y);
        orb.t_grid[i] = t;
        orb.v[i] = y[0];
        orb.v_prime[i] = y[1];
    }
    return orb;
}

}  // namespace detail

/// Minimal value below which the period computation is refused: the period
/// diverges as m -> 0 and the answer would be unreliable.
inline constexpr double kSeparatrixGuard = 1e-3;

/// Integrate the critical equation from (m, 0); the period is the first
/// return to a minimum, located by event detection with a Newton polish.
inline DelaunayOrbit periodic_orbit(int dim, double m, double rel_tol = 1e-12,
                                    double abs_tol = 1e-14) {
    const double vs = emden_equilibrium(dim);
    if (!(m > 0) || m > vs)
        throw DomainError("periodic_orbit: minimal value must lie in (0, v*]");
    const double p_s = sobolev_exponent(dim).value();
    const ProblemParams params(dim, p_s);

    if (m == vs) {
        // Constant orbit; report the small-amplitude limiting period.
        const double period = 2 * std::numbers::pi / std::sqrt(static_cast<double>(dim - 2));
        CylindricalOrbit orb{params, OrbitKind::constant, {0.0, period}, {vs, vs}, {0.0, 0.0}};
        orb.energy = emden_energy(dim, vs, 0.0);
        orb.eval = [vs](double) { return vs; };
        orb.eval_derivative = [](double) { return 0.0; };
        return {DelaunayParams{dim, vs, period, 0.0}, std::move(orb)};
    }
    if (m < kSeparatrixGuard * vs)
        throw ConditioningError(
            "periodic_orbit: orbit too close to the separatrix (m < 1e-3 v*); period would be "
            "unreliable");

    auto rhs = [dim](double t, const ode::State<2>& y, ode::State<2>& dy) {
        detail::critical_rhs(dim, t, y, dy);
    };
    ode::IntegratorOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = abs_tol;

    // Generous horizon: the period grows like |ln m| near the separatrix.
    const double horizon =
        20.0 * 2 * std::numbers::pi / std::sqrt(static_cast<double>(dim - 2)) + 10.0 * std::abs(std::log(m / vs));

    auto sol = std::make_shared<ode::DenseSolution<2>>();
    std::vector<ode::EventSpec<2>> events(1);
    events[0].g = [](double, const ode::State<2>& y) { return y[1]; };
    std::vector<ode::EventRecord<2>> hits;
    ode::integrate<2>(rhs, 0.0, ode::State<2>{m, 0.0}, horizon, opts, *sol, events, &hits);

    // First rising crossing of v' (a minimum) closes the period; the falling
    // one before it is the unique maximum.
    double period = -1.0;
    for (const auto& hit : hits) {
        const double vpp = -emden_potential_derivative(dim, hit.y[0]);
        if (vpp > 0) {  // minimum
            period = hit.t;
            break;
        }
    }
    if (period <= 0) throw SearchError("periodic_orbit: no return to a minimum found");

    // Newton polish on v'(T) = 0.
    for (int it = 0; it < 3; ++it) {
        ode::State<2> y;
        sol->eval(period, y);
        const double vpp = -emden_potential_derivative(dim, y[0]);
        if (vpp == 0) break;
        period -= y[1] / vpp;
    }

    DelaunayOrbit d{DelaunayParams{dim, m, period, 0.0},
                    detail::orbit_from_dense(params, OrbitKind::periodic, sol, 0.0, period, 2001)};
    d.orbit.energy = emden_energy(dim, m, 0.0);
    return d;
}

/// psi(r) = h(ln r - phase) r^(-(N-2)/2), the Delaunay-type singular profile.
inline double delaunay_profile(const DelaunayOrbit& d, double r) {
    if (!(r > 0)) throw DomainError("delaunay_profile: r must be > 0");
    const double t = std::log(r);
    const double s = (d.params.dim - 2) / 2.0;
    return d.h(t - d.params.phase) * std::pow(r, -s);
}

inline double delaunay_profile_derivative(const DelaunayOrbit& d, double r) {
    if (!(r > 0)) throw DomainError("delaunay_profile_derivative: r must be > 0");
    const double t = std::log(r);
    const double s = (d.params.dim - 2) / 2.0;
    const double h = d.h(t - d.params.phase);
    const double hp = d.h_derivative(t - d.params.phase);
    return std::pow(r, -s - 1.0) * (hp - s * h);
}

/// Seeding distance along the stable eigendirection of the origin saddle;
/// the construction is verified to be insensitive to it (Richardson check
/// one decade down).
inline constexpr double kManifoldSeed = 1e-8;

/// The fast-decaying connection for p in (p_sg, p_S): an orbit of the damped
/// transformed equation from the equilibrium v = L (t -> -infinity) to 0
/// (t -> +infinity), with forward decay rate N-2-m.
///
/// Computed by integrating backward from the origin saddle along its stable
/// eigendirection: in reversed time that direction is repelling and the
/// equilibrium L attracts, so the connection is obtained without shooting.
inline CylindricalOrbit heteroclinic_subcritical(const ProblemParams& params,
                                                 double seed = kManifoldSeed) {
    const int dim = params.dim;
    const ExponentTable table = exponent_table(dim);
    if (!(params.p > table.p_sg) || !(params.p < table.p_S) || is_critical(params))
        throw RegimeError("heteroclinic_subcritical: requires p in (p_sg, p_S)");

    const double m = params.m_p();
    const double c = dim - 2 - 2 * m;              // negative in this regime
    const double K = m * (dim - 2 - m);            // = L^(p-1)
    const double L = singular_amplitude(params);
    const double nu_stable = -(dim - 2 - m);       // forward decay rate at the saddle

    auto rhs = [c, K, p = params.p](double, const ode::State<2>& y, ode::State<2>& dy) {
        dy[0] = y[1];
        dy[1] = -c * y[1] + K * y[0] - odd_power(y[0], p);
    };

    auto run = [&](double delta) {
        const double norm = std::hypot(1.0, nu_stable);
        ode::State<2> y0{delta / norm, delta * nu_stable / norm};
        // Backward span: climb out of the saddle, then settle into L.
        const double climb = std::log(L / delta + 10.0) / (dim - 2 - m);
        const double settle = (2.0 / std::abs(c)) * (std::log(std::max(L, 1.0)) + 23.0);
        const double t_back = -(1.5 * climb + settle + 20.0);

        ode::IntegratorOptions opts;
        opts.rel_tol = 1e-11;
        opts.abs_tol = 1e-13;
        auto sol = std::make_shared<ode::DenseSolution<2>>();
        ode::integrate<2>(rhs, 0.0, y0, t_back, opts, *sol);
        return std::make_pair(sol, t_back);
    };

    auto [sol, t_back] = run(seed);
    ode::State<2> tail;
    sol->eval(t_back, tail);

    // Richardson check: one decade smaller seed must give the same backward
    // limit; otherwise the computation is declared ill-conditioned.
    auto [sol_check, t_back_check] = run(seed * 0.1);
    ode::State<2> tail_check;
    sol_check->eval(t_back_check, tail_check);
    if (std::abs(tail[0] - tail_check[0]) > 1e-7 * std::max(1.0, L))
        throw ConditioningError("heteroclinic_subcritical: backward limit sensitive to seeding");

    CylindricalOrbit orb = detail::orbit_from_dense(params, OrbitKind::heteroclinic, sol, t_back,
                                                    0.0, 4001);
    return orb;
}

}  // namespace semiheat
