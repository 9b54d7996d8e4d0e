#pragma once

// Shooting integration of the radial steady-state equation
//   u'' + ((N-1)/r) u' + |u|^(p-1) u = 0,  u(0) = 1, u'(0) = 0,
// and the rescaling family phi_lambda(r) = lambda Phi(lambda^((p-1)/2) r).

#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "semiheat/dopri5.hpp"
#include "semiheat/errors.hpp"
#include "semiheat/exponents.hpp"

namespace semiheat {

inline double odd_power(double u, double p) {
    // |u|^(p-1) u, the odd extension used to continue past roots.
    return (u == 0.0) ? 0.0 : std::copysign(std::pow(std::abs(u), p), u);
}

namespace detail {

/// Dense data of the unit profile Phi, shared by all rescalings.
struct ProfileCore {
    ProblemParams params;
    double startup_radius;  // Taylor series used on [0, startup_radius]
    ode::DenseSolution<2> sol;
    double r_max;

    // Series Phi(r) = 1 - r^2/(2N) + p r^4 / (8N(N+2)) near the coordinate
    // singularity at r = 0 (matched coefficients, verified in tests).
    double series_value(double r) const {
        const double n = params.dim;
        return 1.0 - r * r / (2 * n) + params.p * r * r * r * r / (8 * n * (n + 2));
    }
    double series_derivative(double r) const {
        const double n = params.dim;
        return -r / n + params.p * r * r * r / (2 * n * (n + 2));
    }

    double value(double r) const {
        if (r < 0) throw DomainError("profile: negative radius");
        if (r <= startup_radius) return series_value(r);
        return sol.eval_component(r, 0);
    }
    double derivative(double r) const {
        if (r < 0) throw DomainError("profile: negative radius");
        if (r <= startup_radius) return series_derivative(r);
        return sol.eval_component(r, 1);
    }
};

}  // namespace detail

/// A member of the radial steady-state family on [0, r_max()], evaluable at
/// arbitrary radii through the integrator's dense output.
class RadialProfile {
  public:
    RadialProfile(ProblemParams params, double lambda,
                  std::shared_ptr<const detail::ProfileCore> core,
                  std::vector<double> grid, std::vector<double> values,
                  std::vector<double> derivatives, std::optional<double> first_root,
                  double r_max, double error_estimate)
        : params_(params),
          lambda_(lambda),
          core_(std::move(core)),
          grid_(std::move(grid)),
          values_(std::move(values)),
          derivatives_(std::move(derivatives)),
          first_root_(first_root),
          r_max_(r_max),
          error_estimate_(error_estimate) {}

    const ProblemParams& params() const { return params_; }
    double lambda() const { return lambda_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& derivatives() const { return derivatives_; }
    std::optional<double> first_root() const { return first_root_; }
    double r_max() const { return r_max_; }
    double error_estimate() const { return error_estimate_; }

    /// Scale factor applied to the radius when mapping into the unit profile.
    double radius_scale() const { return std::pow(lambda_, (params_.p - 1.0) / 2.0); }

    double value(double r) const { return lambda_ * core_->value(radius_scale() * r); }
    double derivative(double r) const {
        return lambda_ * radius_scale() * core_->derivative(radius_scale() * r);
    }

    std::shared_ptr<const detail::ProfileCore> core() const { return core_; }

  private:
    ProblemParams params_;
    double lambda_;
    std::shared_ptr<const detail::ProfileCore> core_;
    std::vector<double> grid_, values_, derivatives_;
    std::optional<double> first_root_;
    double r_max_;
    double error_estimate_;
};

/// Radius where the Taylor startup hands over to the integrator.
inline constexpr double kStartupRadius = 1e-4;

/// Integrate the unit profile Phi out to r_max. If Phi crosses zero the
/// first root is located by event detection and integration continues with
/// the odd nonlinearity.
inline RadialProfile integrate_regular(ProblemParams params, double r_max, double rel_tol = 1e-10,
                                       double abs_tol = 1e-12) {
    if (!(r_max > 0)) throw DomainError("integrate_regular: r_max must be > 0");
    if (!(rel_tol > 0) || rel_tol > 1e-3 || !(abs_tol > 0) || abs_tol > 1e-3)
        throw DomainError("integrate_regular: tolerances must lie in (0, 1e-3]");

    auto core = std::make_shared<detail::ProfileCore>(detail::ProfileCore{
        params, kStartupRadius, {}, r_max});

    const double n = params.dim;
    const double p = params.p;
    auto rhs = [n, p](double r, const ode::State<2>& y, ode::State<2>& dy) {
        dy[0] = y[1];
        dy[1] = -(n - 1) / r * y[1] - odd_power(y[0], p);
    };

    ode::State<2> y0{core->series_value(kStartupRadius), core->series_derivative(kStartupRadius)};

    ode::IntegratorOptions opts;
    opts.rel_tol = rel_tol;
    opts.abs_tol = abs_tol;

    std::vector<ode::EventSpec<2>> events(1);
    events[0].g = [](double, const ode::State<2>& y) { return y[0]; };
    events[0].direction = 0;
    events[0].terminal = false;
    std::vector<ode::EventRecord<2>> hits;

    try {
        ode::integrate<2>(rhs, kStartupRadius, y0, r_max, opts, core->sol, events, &hits);
    } catch (const IntegrationError& e) {
        throw IntegrationError(std::string("integrate_regular: ") + e.what(), e.last_abscissa);
    }

    std::optional<double> first_root;
    if (!hits.empty()) first_root = hits.front().t;

    // Checkpoint grid: origin, startup radius, then accepted step endpoints.
    std::vector<double> grid{0.0, kStartupRadius};
    std::vector<double> values{1.0, core->series_value(kStartupRadius)};
    std::vector<double> derivatives{0.0, core->series_derivative(kStartupRadius)};
    for (const auto& seg : core->sol.raw_segments()) {
        const double r = seg.t0 + seg.h;
        if (r > core->sol.t_end()) break;
        ode::State<2> y;
        seg.eval(r, y);
        grid.push_back(r);
        values.push_back(y[0]);
        derivatives.push_back(y[1]);
    }

    const double err = core->sol.error_estimate();
    return RadialProfile(params, 1.0, core, std::move(grid), std::move(values),
                         std::move(derivatives), first_root, r_max, err);
}

/// phi_lambda from an existing profile: the grid contracts by
/// lambda^(-(p-1)/2), values scale by lambda, derivatives by lambda^((p+1)/2).
inline RadialProfile rescale_profile(const RadialProfile& profile, double lambda) {
    if (!(lambda > 0)) throw DomainError("rescale_profile: lambda must be > 0");
    const double p = profile.params().p;
    const double new_lambda = profile.lambda() * lambda;
    const double rscale = std::pow(lambda, -(p - 1.0) / 2.0);
    const double dscale = lambda * std::pow(lambda, (p - 1.0) / 2.0);

    std::vector<double> grid(profile.grid()), values(profile.values()),
        derivatives(profile.derivatives());
    for (auto& r : grid) r *= rscale;
    for (auto& v : values) v *= lambda;
    for (auto& d : derivatives) d *= dscale;

    std::optional<double> root = profile.first_root();
    if (root) root = *root * rscale;

    return RadialProfile(profile.params(), new_lambda, profile.core(), std::move(grid),
                         std::move(values), std::move(derivatives), root,
                         profile.r_max() * rscale, profile.error_estimate() * lambda);
}

struct AsymptoticRatio {
    double mean;
    double min_ratio;
    double max_ratio;
};

/// Mean of Phi/phi_infinity over [window_lo, window_hi]; only meaningful for
/// p > p_S where the ratio tends to 1.
inline AsymptoticRatio asymptotic_ratio(const RadialProfile& profile, double window_lo,
                                        double window_hi, int samples = 1000) {
    const ProblemParams& params = profile.params();
    const ExtendedReal ps = sobolev_exponent(params.dim);
    if (!(params.p > ps) || is_critical(params))
        throw RegimeError("asymptotic_ratio: requires p > p_S(N)");
    if (!(window_lo > 0) || !(window_hi > window_lo))
        throw DomainError("asymptotic_ratio: empty window");
    if (window_hi > profile.r_max() * (1 + 1e-12))
        throw DomainError("asymptotic_ratio: window beyond computed range");

    double sum = 0.0, lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < samples; ++i) {
        const double r = window_lo * std::pow(window_hi / window_lo,
                                              static_cast<double>(i) / (samples - 1));
        const double ratio = profile.value(r) / phi_infinity(params, r);
        sum += ratio;
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    return {sum / samples, lo, hi};
}

/// Explicit regular profile at the critical exponent p = p_S(N):
///   Phi(r) = (1 + r^2 / (N(N-2)))^(-(N-2)/2).
inline double critical_bubble(int dim, double r) {
    if (dim < 3) throw DomainError("critical_bubble: requires N >= 3");
    const double nn = static_cast<double>(dim) * (dim - 2);
    return std::pow(1.0 + r * r / nn, -(dim - 2) / 2.0);
}

inline double critical_bubble_derivative(int dim, double r) {
    if (dim < 3) throw DomainError("critical_bubble_derivative: requires N >= 3");
    const double nn = static_cast<double>(dim) * (dim - 2);
    const double base = 1.0 + r * r / nn;
    return -(dim - 2) / 2.0 * std::pow(base, -(dim - 2) / 2.0 - 1.0) * (2.0 * r / nn);
}

}  // namespace semiheat
