#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "semiheat/dopri5.hpp"

using namespace semiheat;

namespace {

void harmonic(double, const ode::State<2>& y, ode::State<2>& dy) {
    dy[0] = y[1];
    dy[1] = -y[0];
}

}  // namespace

TEST_CASE("dopri5 integrates the harmonic oscillator to tolerance") {
    ode::IntegratorOptions opts;
    opts.rel_tol = 1e-11;
    opts.abs_tol = 1e-13;
    ode::DenseSolution<2> sol;
    const auto yT = ode::integrate<2>(harmonic, 0.0, {1.0, 0.0}, 20.0, opts, sol);
    CHECK(yT[0] == Catch::Approx(std::cos(20.0)).margin(1e-9));
    CHECK(yT[1] == Catch::Approx(-std::sin(20.0)).margin(1e-9));
}

TEST_CASE("dense output matches the true solution between steps") {
    ode::IntegratorOptions opts;
    ode::DenseSolution<2> sol;
    ode::integrate<2>(harmonic, 0.0, {1.0, 0.0}, 10.0, opts, sol);
    for (int i = 0; i <= 1000; ++i) {
        const double t = 10.0 * i / 1000.0;
        ode::State<2> y;
        sol.eval(t, y);
        REQUIRE(y[0] == Catch::Approx(std::cos(t)).margin(5e-9));
    }
}

TEST_CASE("backward integration") {
    ode::IntegratorOptions opts;
    ode::DenseSolution<2> sol;
    const auto y = ode::integrate<2>(harmonic, 0.0, {1.0, 0.0}, -5.0, opts, sol);
    CHECK(y[0] == Catch::Approx(std::cos(5.0)).margin(1e-9));
    CHECK(sol.eval_component(-2.5, 0) == Catch::Approx(std::cos(2.5)).margin(1e-9));
}

TEST_CASE("event location by bisection on dense output") {
    // y = cos t crosses zero at pi/2, 3pi/2, ...
    ode::IntegratorOptions opts;
    ode::DenseSolution<2> sol;
    std::vector<ode::EventSpec<2>> events(1);
    events[0].g = [](double, const ode::State<2>& y) { return y[0]; };
    std::vector<ode::EventRecord<2>> hits;
    ode::integrate<2>(harmonic, 0.0, {1.0, 0.0}, 10.0, opts, sol, events, &hits);
    REQUIRE(hits.size() == 3);
    CHECK(hits[0].t == Catch::Approx(std::numbers::pi / 2).margin(1e-11));
    CHECK(hits[1].t == Catch::Approx(3 * std::numbers::pi / 2).margin(1e-11));
    CHECK(hits[2].t == Catch::Approx(5 * std::numbers::pi / 2).margin(1e-11));
}

TEST_CASE("terminal event truncates the solution") {
    ode::IntegratorOptions opts;
    ode::DenseSolution<2> sol;
    std::vector<ode::EventSpec<2>> events(1);
    events[0].g = [](double, const ode::State<2>& y) { return y[0]; };
    events[0].terminal = true;
    events[0].direction = -1;
    std::vector<ode::EventRecord<2>> hits;
    const auto y = ode::integrate<2>(harmonic, 0.0, {1.0, 0.0}, 10.0, opts, sol, events, &hits);
    REQUIRE(hits.size() == 1);
    CHECK(sol.t_end() == Catch::Approx(std::numbers::pi / 2).margin(1e-11));
    CHECK(std::abs(y[0]) < 1e-10);
}

TEST_CASE("stiff-ish decay keeps the error controlled") {
    auto decay = [](double, const ode::State<1>& y, ode::State<1>& dy) { dy[0] = -50.0 * y[0]; };
    ode::IntegratorOptions opts;
    ode::DenseSolution<1> sol;
    const auto y = ode::integrate<1>(decay, 0.0, {1.0}, 1.0, opts, sol);
    CHECK(y[0] == Catch::Approx(std::exp(-50.0)).epsilon(1e-7));
}
