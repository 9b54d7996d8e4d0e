#pragma once

// Detection, refinement and counting of radial intersections between
// profiles. The scan is logarithmic in r (Delaunay oscillations are
// log-periodic), with local x10 refinement near sign changes and
// near-tangencies, and bracketed bisection for each root.

#include <cmath>
#include <functional>
#include <vector>

#include "semiheat/emden_fowler.hpp"
#include "semiheat/errors.hpp"
#include "semiheat/exponents.hpp"
#include "semiheat/radial_ode.hpp"

namespace semiheat {

/// A radial function with a derivative, the common currency of this module.
struct RadialFn {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
};

inline RadialFn make_radial_fn(const RadialProfile& profile) {
    auto p = std::make_shared<RadialProfile>(profile);
    return {[p](double r) { return p->value(r); }, [p](double r) { return p->derivative(r); }};
}

inline RadialFn make_phi_infinity_fn(const ProblemParams& params) {
    const double L = singular_amplitude(params);
    const double m = params.m_p();
    return {[L, m](double r) { return L * std::pow(r, -m); },
            [L, m](double r) { return -m * L * std::pow(r, -m - 1.0); }};
}

inline RadialFn make_delaunay_fn(const DelaunayOrbit& d) {
    auto dp = std::make_shared<DelaunayOrbit>(d);
    return {[dp](double r) { return delaunay_profile(*dp, r); },
            [dp](double r) { return delaunay_profile_derivative(*dp, r); }};
}

/// phi_lambda at the critical exponent, from the explicit bubble.
inline RadialFn make_critical_phi_lambda_fn(int dim, double lambda) {
    if (dim < 3) throw DomainError("make_critical_phi_lambda_fn: requires N >= 3");
    const double rscale = std::pow(lambda, 2.0 / (dim - 2));
    return {[dim, lambda, rscale](double r) { return lambda * critical_bubble(dim, rscale * r); },
            [dim, lambda, rscale](double r) {
                return lambda * rscale * critical_bubble_derivative(dim, rscale * r);
            }};
}

struct IntersectionSet {
    std::vector<double> radii;
    std::vector<bool> transversal;
    double window_lo = 0.0, window_hi = 0.0;
    bool degenerate = false;          // inputs indistinguishable on the scan grid
    bool resolution_warning = false;  // roots clustered at the scan resolution
};

namespace detail {

inline double bisect_root(const RadialFn& f, const RadialFn& g, double a, double b, double da) {
    for (int it = 0; it < 200 && (b - a) > 1e-13 * std::max(1.0, a); ++it) {
        const double mid = 0.5 * (a + b);
        const double dm = f.value(mid) - g.value(mid);
        if ((da <= 0 && dm <= 0) || (da > 0 && dm > 0)) {
            a = mid;
            da = dm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// Scan density of the base grid, per decade of radius.
inline constexpr int kScanPerDecade = 10'000;

/// All sign changes of f - g on [window_lo, window_hi], refined by bisection.
/// Transversality requires |f' - g'| > 10 tol max(1, |f'|, |g'|) at the root.
inline IntersectionSet radial_intersections(const RadialFn& f, const RadialFn& g,
                                            double window_lo, double window_hi,
                                            double tol = 1e-10) {
    if (!(window_lo > 0) || !(window_hi > window_lo))
        throw DomainError("radial_intersections: invalid window");

    IntersectionSet out;
    out.window_lo = window_lo;
    out.window_hi = window_hi;

    const double decades = std::log10(window_hi / window_lo);
    const long n = std::max<long>(64, std::lround(kScanPerDecade * std::max(decades, 0.01)));

    auto diff = [&](double r) { return f.value(r) - g.value(r); };
    auto scale_at = [&](double r) {
        return std::max({std::abs(f.value(r)), std::abs(g.value(r)), 1e-300});
    };

    std::vector<double> grid(n + 1), d(n + 1);
    bool all_zero = true;
    for (long j = 0; j <= n; ++j) {
        grid[j] = window_lo * std::pow(window_hi / window_lo, static_cast<double>(j) / n);
        d[j] = diff(grid[j]);
        if (d[j] != 0.0) all_zero = false;
    }
    if (all_zero) {
        out.degenerate = true;
        return out;
    }

    // Examine one base interval, refining x10 when flagged; depth-limited.
    std::function<void(double, double, double, double, int)> examine =
        [&](double a, double b, double da, double db, int depth) {
            const bool sign_change = (da <= 0 && db > 0) || (da >= 0 && db < 0) || (da == 0);
            const double local = std::max(scale_at(a), scale_at(b));
            const bool near_tangent = std::min(std::abs(da), std::abs(db)) < 1e-3 * local;
            if (!sign_change && !near_tangent) return;
            if ((sign_change || near_tangent) && depth < 2) {
                double xl = a, dl = da;
                for (int j = 1; j <= 10; ++j) {
                    const double xr = a * std::pow(b / a, j / 10.0);
                    const double dr = (j == 10) ? db : diff(xr);
                    examine(xl, xr, dl, dr, depth + 1);
                    xl = xr;
                    dl = dr;
                }
                return;
            }
            if (!sign_change) return;
            const double root = detail::bisect_root(f, g, a, b, da);
            if (!out.radii.empty() && root - out.radii.back() < 1e-10 * root) return;
            out.radii.push_back(root);
            const double dgap = std::abs(f.derivative(root) - g.derivative(root));
            const double dscale = std::max({1.0, std::abs(f.derivative(root)),
                                            std::abs(g.derivative(root))});
            out.transversal.push_back(dgap > 10.0 * tol * dscale);
        };

    for (long j = 0; j < n; ++j) examine(grid[j], grid[j + 1], d[j], d[j + 1], 0);

    // Two roots inside one base interval means the base grid was at its
    // resolution limit there; report, never drop silently.
    for (std::size_t i = 1; i < out.radii.size(); ++i) {
        const double span = out.radii[i] / out.radii[i - 1];
        if (span < std::pow(window_hi / window_lo, 1.0 / n))
            out.resolution_warning = true;
    }
    return out;
}

/// Smallest radius where Phi meets phi_infinity; defined for p in (p_sg, p_JL).
inline double first_intersection_radius(const RadialProfile& profile) {
    const ProblemParams& params = profile.params();
    const ExponentTable t = exponent_table(params.dim);
    if (!(params.p > t.p_sg) || !(params.p < t.p_JL))
        throw RegimeError("first_intersection_radius: requires p in (p_sg, p_JL)");

    const RadialFn f = make_radial_fn(profile);
    const RadialFn g = make_phi_infinity_fn(params);
    double hi = profile.r_max() * (1 - 1e-12);
    if (profile.first_root()) hi = std::min(hi, *profile.first_root());
    const IntersectionSet s = radial_intersections(f, g, 1e-6, hi);
    if (s.radii.empty())
        throw SearchError("first_intersection_radius: no intersection found in the search window");
    return s.radii.front();
}

inline double first_intersection_radius(const ProblemParams& params, double r_max = 50.0) {
    return first_intersection_radius(integrate_regular(params, r_max));
}

struct CensusResult {
    IntersectionSet set;
    long count = 0;
    Regime regime = Regime::below_serrin;
    bool consistent = false;
};

/// Count intersections of Phi with phi_infinity on (1e-6, R) and check the
/// verdict the regime taxonomy predicts. "Infinitely many" is operationalised
/// as a strictly larger census on (1e-6, 2R); no infinite count is claimed.
inline CensusResult regime_intersection_census(const ProblemParams& params, double R) {
    const ExponentTable t = exponent_table(params.dim);
    if (!(params.p > t.p_sg))
        throw RegimeError("regime_intersection_census: requires p > p_sg(N)");
    if (!(R > 1e-6)) throw DomainError("regime_intersection_census: R must exceed 1e-6");

    const Regime regime = classify_regime(params);
    const bool need_double = regime == Regime::sobolev_to_jl;
    const RadialProfile profile = integrate_regular(params, need_double ? 2 * R : R);
    const RadialFn f = make_radial_fn(profile);
    const RadialFn g = make_phi_infinity_fn(params);

    CensusResult out;
    out.regime = regime;
    out.set = radial_intersections(f, g, 1e-6, R * (1 - 1e-12));
    out.count = static_cast<long>(out.set.radii.size());

    switch (regime) {
        case Regime::serrin_to_sobolev: {
            long before_root = 0;
            for (double r : out.set.radii)
                if (!profile.first_root() || r < *profile.first_root()) ++before_root;
            out.consistent = before_root == 2 && profile.first_root().has_value();
            break;
        }
        case Regime::critical:
            out.consistent = out.count == 2;
            break;
        case Regime::sobolev_to_jl: {
            const IntersectionSet wide = radial_intersections(f, g, 1e-6, 2 * R * (1 - 1e-12));
            out.consistent = static_cast<long>(wide.radii.size()) > out.count;
            break;
        }
        case Regime::at_or_above_jl:
            out.consistent = out.count == 0;
            break;
        case Regime::below_serrin:
            out.consistent = false;
            break;
    }
    return out;
}

/// First radius where phi_lambda meets the Delaunay profile psi, at p = p_S.
/// The bracket [band entry, homoclinic peak] always contains a crossing:
/// at entry the translated homoclinic sits at the minimum of h, at the peak
/// it exceeds the maximum of h.
inline double tau_lambda(const ProblemParams& params, const DelaunayOrbit& d, double lambda,
                         double tol = 1e-10) {
    if (!is_critical(params))
        throw RegimeError("tau_lambda: requires p = p_S(N)");
    if (!(lambda > 0)) throw DomainError("tau_lambda: lambda must be > 0");
    const int dim = params.dim;
    const double s = (dim - 2) / 2.0;
    const double amp = std::pow(static_cast<double>(dim) * (dim - 2), s / 2.0);

    // Peak location of the translated homoclinic in t = ln r.
    const double t_peak = critical_profile_shift(dim) - (2.0 / (dim - 2)) * std::log(lambda);
    // Band entry: homoclinic value equals the minimum of h.
    const double ratio = std::pow(amp / d.params.min_value, 1.0 / s);
    const double s_entry = -std::acosh(std::max(ratio / 2.0, 1.0 + 1e-15));

    const RadialFn f = make_critical_phi_lambda_fn(dim, lambda);
    const RadialFn g = make_delaunay_fn(d);
    const double lo = std::exp(t_peak + s_entry - 0.5);
    const double hi = std::exp(t_peak + 0.25);
    const IntersectionSet s_found = radial_intersections(f, g, lo, hi, tol);
    if (s_found.radii.empty())
        throw SearchError("tau_lambda: no crossing located inside the guaranteed bracket");
    return s_found.radii.front();
}

}  // namespace semiheat
