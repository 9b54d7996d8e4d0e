#pragma once

// Adaptive Dormand-Prince 5(4) pair with dense output (Hairer's quartic
// interpolant) and event location by bracketed bisection on the dense
// output. Kept deliberately small: fixed-dimension states, one controller.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "semiheat/errors.hpp"

namespace semiheat::ode {

template <int Dim>
using State = std::array<double, Dim>;

struct IntegratorOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double initial_step = 0.0;  // 0 = choose automatically
    double max_step = std::numeric_limits<double>::infinity();
    long max_steps = 4'000'000;
};

/// One accepted step with the five interpolation coefficient vectors.
/// For theta in [0,1]:
///   y(t0 + theta h) = c1 + theta (c2 + (1-theta)(c3 + theta (c4 + (1-theta) c5)))
template <int Dim>
struct DenseSegment {
    double t0, h;
    State<Dim> c1, c2, c3, c4, c5;

    void eval(double t, State<Dim>& out) const {
        const double th = (t - t0) / h;
        const double th1 = 1.0 - th;
        for (int i = 0; i < Dim; ++i)
            out[i] = c1[i] + th * (c2[i] + th1 * (c3[i] + th * (c4[i] + th1 * c5[i])));
    }
};

template <int Dim>
class DenseSolution {
  public:
    double t_begin() const { return t_begin_; }
    double t_end() const { return t_end_; }
    bool forward() const { return forward_; }
    std::size_t segments() const { return segs_.size(); }

    void eval(double t, State<Dim>& out) const {
        segs_[locate(t)].eval(t, out);
    }
    double eval_component(double t, int comp) const {
        State<Dim> y;
        eval(t, y);
        return y[comp];
    }

    /// Sum of local error-norm estimates over accepted steps; a pessimistic
    /// but honest proxy for the accumulated truncation error.
    double error_estimate() const { return err_accum_; }

    // Used by the integrator.
    void push(const DenseSegment<Dim>& s) { segs_.push_back(s); }
    void set_range(double a, double b) {
        t_begin_ = a;
        t_end_ = b;
        forward_ = b >= a;
    }
    void add_error(double e) { err_accum_ += e; }
    const std::vector<DenseSegment<Dim>>& raw_segments() const { return segs_; }

  private:
    std::size_t locate(double t) const {
        if (segs_.empty()) throw DomainError("DenseSolution: empty");
        const double lo = std::min(t_begin_, t_end_);
        const double hi = std::max(t_begin_, t_end_);
        const double slack = 1e-9 * (hi - lo) + 1e-300;
        if (t < lo - slack || t > hi + slack)
            throw DomainError("DenseSolution: evaluation outside computed range");
        // Binary search over segment start times (monotone in either direction).
        std::size_t a = 0, b = segs_.size() - 1;
        while (a < b) {
            const std::size_t mid = (a + b + 1) / 2;
            const bool before = forward_ ? (segs_[mid].t0 <= t) : (segs_[mid].t0 >= t);
            if (before)
                a = mid;
            else
                b = mid - 1;
        }
        return a;
    }

    std::vector<DenseSegment<Dim>> segs_;
    double t_begin_ = 0.0, t_end_ = 0.0;
    double err_accum_ = 0.0;
    bool forward_ = true;
};

/// Scalar event g(t, y); a root of g along the trajectory is located by
/// bisection on the dense output to 1e-12 absolute in t.
template <int Dim>
struct EventSpec {
    std::function<double(double, const State<Dim>&)> g;
    int direction = 0;     // +1 rising only, -1 falling only, 0 both
    bool terminal = false;
};

template <int Dim>
struct EventRecord {
    std::size_t event_index;
    double t;
    State<Dim> y;
};

namespace detail {

// Dormand-Prince RK5(4)7M coefficients.
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense-output weights (Hairer, Norsett, Wanner vol. I, DOPRI5).
inline constexpr double d1 = -12715105075.0 / 11282082432.0;
inline constexpr double d3 = 87487479700.0 / 32700410799.0;
inline constexpr double d4 = -10690763975.0 / 1880347072.0;
inline constexpr double d5 = 701980252875.0 / 199316789632.0;
inline constexpr double d6 = -1453857185.0 / 822651844.0;
inline constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace detail

template <int Dim, class Rhs>
class Dopri5 {
  public:
    Dopri5(Rhs rhs, IntegratorOptions opts) : f_(std::move(rhs)), opts_(opts) {}

    /// Integrate from (t0, y0) to t1 (either direction), recording dense
    /// segments into `sol` and events into `events_out`. Returns the final
    /// state; on a terminal event, integration stops at the event time.
    State<Dim> run(double t0, State<Dim> y0, double t1, DenseSolution<Dim>& sol,
                   const std::vector<EventSpec<Dim>>& events = {},
                   std::vector<EventRecord<Dim>>* events_out = nullptr) {
        const double dir = (t1 >= t0) ? 1.0 : -1.0;
        double t = t0;
        State<Dim> y = y0, k1, k7;
        f_(t, y, k1);
        double h = opts_.initial_step > 0 ? opts_.initial_step * dir : initial_step(t, y, k1, dir);
        sol.set_range(t0, t1);

        std::vector<double> gprev(events.size());
        for (std::size_t e = 0; e < events.size(); ++e) gprev[e] = events[e].g(t, y);

        for (long step = 0; step < opts_.max_steps; ++step) {
            if (dir * (t - t1) >= 0.0) {
                sol.set_range(t0, t);
                return y;
            }
            if (dir * (t + h - t1) > 0.0) h = t1 - t;
            if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)) + 1e-300)
                throw IntegrationError("dopri5: step size underflow", t);

            State<Dim> y1;
            double err = attempt(t, y, k1, h, y1, k7);
            if (err > 1.0) {
                h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
                continue;
            }

            sol.push(make_segment(t, h, y, y1));
            sol.add_error(err * local_scale(y, y1));

            const double t_new = t + h;
            if (!events.empty()) {
                double t_terminal;
                if (handle_events(sol.raw_segments().back(), t, t_new, events, gprev, events_out,
                                  t_terminal)) {
                    // Truncate the reported range at the terminal event time.
                    sol.set_range(t0, t_terminal);
                    State<Dim> ye;
                    sol.raw_segments().back().eval(t_terminal, ye);
                    return ye;
                }
            }

            t = t_new;
            y = y1;
            k1 = k7;  // FSAL
            const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
            h *= fac;
            if (std::abs(h) > opts_.max_step) h = dir * opts_.max_step;
        }
        throw IntegrationError("dopri5: step budget exhausted", t);
    }

  private:
    double local_scale(const State<Dim>& y0, const State<Dim>& y1) const {
        double s = 0.0;
        for (int i = 0; i < Dim; ++i)
            s = std::max(s, opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y0[i]), std::abs(y1[i])));
        return s;
    }

    /// One trial step; fills y1 and k7 (= f at the end point), returns the
    /// scaled error norm (accept iff <= 1).
    double attempt(double t, const State<Dim>& y, const State<Dim>& k1, double h, State<Dim>& y1,
                   State<Dim>& k7) {
        using namespace detail;
        State<Dim> tmp, k2, k3, k4, k5, k6;
        for (int i = 0; i < Dim; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        f_(t + h / 5, tmp, k2);
        for (int i = 0; i < Dim; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f_(t + 3 * h / 10, tmp, k3);
        for (int i = 0; i < Dim; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f_(t + 4 * h / 5, tmp, k4);
        for (int i = 0; i < Dim; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f_(t + 8 * h / 9, tmp, k5);
        for (int i = 0; i < Dim; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f_(t + h, tmp, k6);
        for (int i = 0; i < Dim; ++i)
            y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f_(t + h, y1, k7);

        double err = 0.0;
        for (int i = 0; i < Dim; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                                   e7 * k7[i]);
            const double sc =
                opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / Dim);

        ks_ = {k1, k2, k3, k4, k5, k6, k7};
        return err;
    }

    DenseSegment<Dim> make_segment(double t, double h, const State<Dim>& y0,
                                   const State<Dim>& y1) const {
        using namespace detail;
        const auto& k = ks_;
        DenseSegment<Dim> s;
        s.t0 = t;
        s.h = h;
        for (int i = 0; i < Dim; ++i) {
            const double dy = y1[i] - y0[i];
            const double bspl = h * k[0][i] - dy;
            s.c1[i] = y0[i];
            s.c2[i] = dy;
            s.c3[i] = bspl;
            s.c4[i] = dy - h * k[6][i] - bspl;
            s.c5[i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                           d6 * k[5][i] + d7 * k[6][i]);
        }
        return s;
    }

    bool handle_events(const DenseSegment<Dim>& seg, double ta, double tb,
                       const std::vector<EventSpec<Dim>>& events, std::vector<double>& gprev,
                       std::vector<EventRecord<Dim>>* out, double& t_terminal) {
        constexpr int kScan = 8;
        State<Dim> y;
        for (std::size_t e = 0; e < events.size(); ++e) {
            double tl = ta, gl = gprev[e];
            for (int j = 1; j <= kScan; ++j) {
                const double tr = ta + (tb - ta) * j / kScan;
                seg.eval(tr, y);
                const double gr = events[e].g(tr, y);
                const bool crossing = (gl < 0 && gr >= 0 && events[e].direction >= 0) ||
                                      (gl > 0 && gr <= 0 && events[e].direction <= 0);
                if (crossing) {
                    const double te = bisect_event(seg, events[e], tl, tr, gl);
                    if (out) {
                        seg.eval(te, y);
                        out->push_back({e, te, y});
                    }
                    if (events[e].terminal) {
                        gprev[e] = gr;
                        t_terminal = te;
                        return true;
                    }
                }
                tl = tr;
                gl = gr;
            }
            gprev[e] = gl;
        }
        return false;
    }

    double bisect_event(const DenseSegment<Dim>& seg, const EventSpec<Dim>& ev, double a, double b,
                        double ga) {
        State<Dim> y;
        for (int it = 0; it < 200 && std::abs(b - a) > 1e-12; ++it) {
            const double mid = 0.5 * (a + b);
            seg.eval(mid, y);
            const double gm = ev.g(mid, y);
            if ((ga <= 0 && gm <= 0) || (ga > 0 && gm > 0)) {
                a = mid;
                ga = gm;
            } else {
                b = mid;
            }
        }
        return 0.5 * (a + b);
    }

    double initial_step(double t, const State<Dim>& y, const State<Dim>& f0, double dir) const {
        double dnorm = 0.0, ynorm = 0.0;
        for (int i = 0; i < Dim; ++i) {
            dnorm = std::max(dnorm, std::abs(f0[i]));
            ynorm = std::max(ynorm, std::abs(y[i]));
        }
        const double scale = opts_.abs_tol + opts_.rel_tol * ynorm;
        double h = (dnorm > 0) ? 0.01 * std::pow(scale / dnorm, 0.5) : 1e-6;
        h = std::min(h, opts_.max_step);
        (void)t;
        return dir * std::max(h, 1e-12);
    }

    Rhs f_;
    IntegratorOptions opts_;
    std::array<State<Dim>, 7> ks_{};
};

/// Convenience wrapper.
template <int Dim, class Rhs>
State<Dim> integrate(Rhs rhs, double t0, const State<Dim>& y0, double t1, IntegratorOptions opts,
                     DenseSolution<Dim>& sol, const std::vector<EventSpec<Dim>>& events = {},
                     std::vector<EventRecord<Dim>>* events_out = nullptr) {
    Dopri5<Dim, Rhs> solver(std::move(rhs), opts);
    return solver.run(t0, y0, t1, sol, events, events_out);
}

}  // namespace semiheat::ode
