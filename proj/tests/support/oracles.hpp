#pragma once

// Independent oracles used by the tests. These deliberately avoid the
// library's own integration/event machinery: the period oracle uses energy
// quadrature, the intersection oracle a brute-force uniform scan, and the
// doubling verifier an exhaustive ball scan.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace oracles {

/// Libration period of v'' = -W'(v) through (v_min, 0) via the energy
/// quadrature T = 2 int dv / sqrt(2(E - W(v))). The substitution
/// v = v_min + (v_max - v_min) sin^2(theta) removes both inverse-square-root
/// endpoint singularities: the integrand becomes 2 sqrt(2) / sqrt(G) with
/// G(v) = (E - W(v)) / ((v - v_min)(v_max - v)) smooth and positive.
struct PeriodOracle {
    std::function<double(double)> W;        // potential
    std::function<double(double)> W_prime;  // its derivative

    double operator()(double v_min, double v_max_hint_lo, double v_max_hint_hi) const {
        const double E = W(v_min);
        // Locate the right turning point W(v_max) = E by bisection.
        double a = v_max_hint_lo, b = v_max_hint_hi;
        if (!((W(a) - E) < 0 && (W(b) - E) > 0))
            throw std::runtime_error("PeriodOracle: turning point not bracketed");
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (a + b);
            ((W(mid) - E) < 0 ? a : b) = mid;
        }
        const double v_max = 0.5 * (a + b);

        auto G = [&](double v) {
            const double num = E - W(v);
            const double den = (v - v_min) * (v_max - v);
            if (den <= 0) {
                // Endpoint limits by l'Hopital: G = -W'(v_min)/(v_max - v_min)
                // at the left end, +W'(v_max)/(v_max - v_min) at the right.
                if (std::abs(v - v_min) < std::abs(v - v_max))
                    return -W_prime(v_min) / (v_max - v_min);
                return W_prime(v_max) / (v_max - v_min);
            }
            return num / den;
        };

        // Composite Gauss-Legendre (5-point) over theta in [0, pi/2].
        static const double gx[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                     0.5384693101056831, 0.9061798459386640};
        static const double gw[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                     0.4786286704993665, 0.2369268850561891};
        const int panels = 256;
        const double half_pi = 1.5707963267948966;
        double integral = 0.0;
        for (int k = 0; k < panels; ++k) {
            const double t0 = half_pi * k / panels, t1 = half_pi * (k + 1) / panels;
            const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
            for (int j = 0; j < 5; ++j) {
                const double theta = mid + half * gx[j];
                const double s = std::sin(theta);
                const double v = v_min + (v_max - v_min) * s * s;
                integral += half * gw[j] * 2.0 * std::sqrt(2.0) / std::sqrt(G(v));
            }
        }
        return integral;
    }
};

/// Brute-force intersection count: uniform log-spaced scan with `points`
/// samples, counting sign changes of f - g.
inline long brute_force_crossings(const std::function<double(double)>& f,
                                  const std::function<double(double)>& g, double lo, double hi,
                                  long points = 1'000'000) {
    long count = 0;
    double prev = f(lo) - g(lo);
    for (long j = 1; j <= points; ++j) {
        const double r = lo * std::pow(hi / lo, static_cast<double>(j) / points);
        const double d = f(r) - g(r);
        if ((prev < 0 && d >= 0) || (prev > 0 && d <= 0)) ++count;
        if (d != 0) prev = d;
    }
    return count;
}

/// Exhaustive verifier of the doubling conclusions: M(x) >= M(y) and
/// M(z) <= 2 M(x) for every z with d(z, x) <= k / M(x).
inline bool verify_doubling(const std::vector<std::vector<double>>& dist,
                            const std::vector<double>& M, std::size_t y, std::size_t x, double k) {
    if (M[x] < M[y]) return false;
    const double radius = k / M[x];
    for (std::size_t z = 0; z < M.size(); ++z)
        if (dist[z][x] <= radius && M[z] > 2 * M[x]) return false;
    return true;
}

}  // namespace oracles
