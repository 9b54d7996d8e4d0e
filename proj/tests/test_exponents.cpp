#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "semiheat/exponents.hpp"

using namespace semiheat;

TEST_CASE("serrin exponent") {
    CHECK(serrin_exponent(3).value() == Catch::Approx(3.0).margin(0));
    CHECK_FALSE(serrin_exponent(2).is_finite());
    CHECK_FALSE(serrin_exponent(1).is_finite());
    CHECK(serrin_exponent(6).value() == Catch::Approx(1.5).margin(0));
    CHECK_THROWS_AS(serrin_exponent(0), DomainError);
}

TEST_CASE("sobolev exponent") {
    CHECK(sobolev_exponent(3).value() == Catch::Approx(5.0).margin(0));
    CHECK_FALSE(sobolev_exponent(1).is_finite());
    CHECK(sobolev_exponent(6).value() == Catch::Approx(2.0).margin(0));
    CHECK_THROWS_AS(sobolev_exponent(-2), DomainError);
}

TEST_CASE("joseph-lundgren exponent") {
    CHECK_FALSE(joseph_lundgren_exponent(10).is_finite());
    CHECK_FALSE(joseph_lundgren_exponent(3).is_finite());
    CHECK(joseph_lundgren_exponent(11).value() ==
          Catch::Approx(6.9220245868).epsilon(0).margin(1e-9));
    CHECK_THROWS_AS(joseph_lundgren_exponent(0), DomainError);
}

TEST_CASE("exponent ordering p_sg < p_S < p_JL for N = 3..60") {
    for (int n = 3; n <= 60; ++n) {
        const ExponentTable t = exponent_table(n);
        REQUIRE(t.p_sg.is_finite());
        REQUIRE(t.p_S.is_finite());
        CHECK(t.p_sg < t.p_S);
        if (t.p_JL.is_finite()) CHECK(t.p_S < t.p_JL);
    }
}

TEST_CASE("p_JL strictly decreasing for N >= 11") {
    for (int n = 11; n < 60; ++n)
        CHECK(joseph_lundgren_exponent(n + 1).value() < joseph_lundgren_exponent(n).value());
}

TEST_CASE("regime classification") {
    CHECK(classify_regime(ProblemParams(3, 4)) == Regime::serrin_to_sobolev);
    CHECK(classify_regime(ProblemParams(3, 5)) == Regime::critical);
    CHECK(classify_regime(ProblemParams(11, 8)) == Regime::at_or_above_jl);
    CHECK(classify_regime(ProblemParams(11, 3)) == Regime::sobolev_to_jl);
    CHECK(classify_regime(ProblemParams(3, 2)) == Regime::below_serrin);
    CHECK(classify_regime(ProblemParams(1, 7)) == Regime::below_serrin);
    // p_S entered as a rounded decimal still routes to the critical branch.
    CHECK(classify_regime(ProblemParams(3, 5.0 * (1 + 1e-13))) == Regime::critical);
    CHECK(classify_regime(ProblemParams(3, 5.0 * (1 + 1e-13)), 1e-14) ==
          Regime::sobolev_to_jl);
}

TEST_CASE("singular amplitude") {
    CHECK(singular_amplitude(ProblemParams(3, 5)) ==
          Catch::Approx(0.7071067811865476).margin(1e-12));
    CHECK(singular_amplitude(ProblemParams(11, 3)) ==
          Catch::Approx(2.8284271247461903).margin(1e-12));
    CHECK_THROWS_AS(singular_amplitude(ProblemParams(3, 3)), RegimeError);
    // L^(p-1) = (2/(p-1))(N-2-2/(p-1)) by construction.
    const ProblemParams q(7, 2.7);
    const double L = singular_amplitude(q);
    CHECK(std::pow(L, q.p - 1) ==
          Catch::Approx(q.m_p() * (q.dim - 2 - q.m_p())).epsilon(1e-14));
}

TEST_CASE("phi_infinity") {
    const ProblemParams params(3, 5);
    CHECK(phi_infinity(params, 1.0) == Catch::Approx(0.7071067811865476).margin(1e-12));
    CHECK_THROWS_AS(phi_infinity(params, 0.0), DomainError);
    CHECK_THROWS_AS(phi_infinity(params, -1.0), DomainError);
}

TEST_CASE("phi_infinity scale invariance") {
    // lambda * phi_inf(lambda^((p-1)/2) r) = phi_inf(r), 100 random pairs.
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> lam(0.1, 10.0), rad(0.1, 10.0);
    for (const ProblemParams params : {ProblemParams(3, 5), ProblemParams(11, 3)}) {
        for (int i = 0; i < 100; ++i) {
            const double l = lam(rng), r = rad(rng);
            const double lhs = l * phi_infinity(params, std::pow(l, (params.p - 1) / 2) * r);
            const double rhs = phi_infinity(params, r);
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-14));
        }
    }
}

TEST_CASE("phi_infinity steady-state residual") {
    // u'' + (N-1)/r u' + u^p vanishes identically for phi_infinity.
    for (const ProblemParams params : {ProblemParams(3, 5), ProblemParams(3, 4),
                                       ProblemParams(11, 3), ProblemParams(5, 2.5)}) {
        const double m = params.m_p();
        const double L = singular_amplitude(params);
        for (double r : {0.1, 0.7, 1.0, 3.0, 25.0}) {
            const double u = phi_infinity(params, r);
            const double up = phi_infinity_derivative(params, r);
            const double upp = m * (m + 1) * L * std::pow(r, -m - 2);
            const double residual = upp + (params.dim - 1) / r * up + std::pow(u, params.p);
            CHECK(std::abs(residual) <= 1e-12 * std::pow(u, params.p));
        }
    }
}
