#include "vdisc/errors.hpp"
#include "vdisc/solver.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace vdisc;

namespace {

const CouplingParams kDefaults{};
const CouplingTriple kDyadic = CouplingTriple::dyadic(kDefaults);

}  // namespace

TEST_SUITE("scalar reduction") {
    TEST_CASE("lambda = 0 returns d") {
        CHECK(solve_scalar(kDyadic, 0.0) == 1.0);
        CHECK(solve_scalar_offset(kDyadic, 0.0).offset == 0.0);
    }

    TEST_CASE("first members of both families") {
        // lambda = k2/(2d - 1) puts z on y = k2 (x - d) at z = d/2
        CHECK(solve_scalar(kDyadic, 2.0) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(solve_scalar(kDyadic, 8.0 / 7.0) == doctest::Approx(7.0 / 12.0).epsilon(1e-14));
    }

    TEST_CASE("reduced solutions on the first members") {
        const DiscountedSolution a = solve_reduced(kDyadic, 2.0);
        CHECK(a.u == doctest::Approx(0.125).epsilon(1e-14));
        CHECK(a.v == doctest::Approx(-0.375).epsilon(1e-14));
        CHECK(std::fabs(a.residual_u) <= 1e-14);
        CHECK(std::fabs(a.residual_v) <= 1e-14);
        const DiscountedSolution b = solve_reduced(kDyadic, 8.0 / 7.0);
        CHECK(b.u == doctest::Approx(35.0 / 192.0).epsilon(1e-14));
        CHECK(b.z == doctest::Approx(7.0 / 12.0).epsilon(1e-14));
    }

    TEST_CASE("sin-log crossings") {
        const CouplingParams p{0.25, 1.0, 2.0, 1.6, 1.0};
        const auto t = CouplingTriple::sin_log(p);
        for (int n = 1; n <= 5; ++n) {
            const double s = -std::exp(-2.0 * M_PI * n);
            const double lambda = -2.0 * s / (1.0 + s);
            const double z = solve_scalar(t, lambda);
            CHECK(std::fabs(z - (1.0 + s)) <= 1e-15);
            const OffsetRoot root = solve_scalar_offset(t, lambda);
            CHECK(root.offset == doctest::Approx(s).epsilon(1e-12));
        }
    }

    TEST_CASE("rejects bad inputs") {
        CHECK_THROWS_AS(solve_scalar(kDyadic, -1.0), ParamDomainError);
        CHECK_THROWS_AS(solve_scalar(kDyadic, NAN), ParamDomainError);
        CHECK_THROWS_AS(solve_reduced(kDyadic, 0.0), ParamDomainError);
        CHECK_THROWS_AS(solve_scalar(kDyadic, 1.0, {}, Bracket{1.0, 0.5}), ParamDomainError);
        SolverConfig bad;
        bad.tol_res = 0.0;
        CHECK_THROWS_AS(solve_scalar(kDyadic, 1.0, bad), ParamDomainError);
        bad = {};
        bad.bracket_expand = 1.0;
        CHECK_THROWS_AS(solve_scalar(kDyadic, 1.0, bad), ParamDomainError);
    }

    TEST_CASE("callback triple with linear f and g") {
        const auto t = CouplingTriple::from_callbacks([](double x) { return 0.5 * (x - 1.0); },
                                                      [](double x) { return 1.5 * (x + 1.0); }, 1.0, 1.5);
        // h(z) = 2 (z - 1)
        for (double lambda : {1e-3, 0.3, 1.0, 7.0}) {
            CHECK(solve_scalar(t, lambda) == doctest::Approx(2.0 / (lambda + 2.0)).epsilon(1e-13));
            const DiscountedSolution sol = solve_system_iterative(t, lambda);
            const DiscountedSolution red = solve_reduced(t, lambda);
            CHECK(std::fabs(sol.u - red.u) <= 1e-10);
            CHECK(std::fabs(sol.v - red.v) <= 1e-10);
        }
    }

    TEST_CASE("bracket expansion budget") {
        const auto t = CouplingTriple::from_callbacks([](double) { return 1.0; }, [](double) { return -1.0; },
                                                      1.0, 1.0);
        SolverConfig cfg;
        cfg.max_iter = 3;
        CHECK_THROWS_AS(solve_scalar(t, 1e-6, cfg), BracketError);
        // with the default budget the root -2/lambda is found
        CHECK(solve_scalar(t, 1e-6) == doctest::Approx(-2e6).epsilon(1e-12));
    }

    TEST_CASE("the initial bracket does not change the root") {
        std::mt19937_64 rng(21);
        for (int i = 0; i < 300; ++i) {
            const double lambda = oracle::log_uniform(rng, 1e-12, 1e3);
            const double a = solve_scalar(kDyadic, lambda);
            const double b = solve_scalar(kDyadic, lambda, {}, Bracket{-5.0, 10.0});
            const double c = solve_scalar(kDyadic, lambda, {}, Bracket{0.999, 1.0});
            REQUIRE(std::fabs(a - b) <= 2e-16);
            REQUIRE(std::fabs(a - c) <= 2e-16);
        }
    }

    TEST_CASE("z is increasing as lambda decreases and stays in [0, d]") {
        std::mt19937_64 rng(23);
        std::vector<double> lambdas;
        for (int i = 0; i < 500; ++i) {
            lambdas.push_back(oracle::log_uniform(rng, 1e-14, 1e4));
        }
        std::sort(lambdas.begin(), lambdas.end());
        double previous = 1.0;
        for (double lambda : lambdas) {
            const double z = solve_scalar(kDyadic, lambda);
            REQUIRE(z <= previous);
            REQUIRE(z >= 0.0);
            REQUIRE(z <= 1.0);
            previous = z;
        }
    }
}

TEST_SUITE("joint system") {
    TEST_CASE("iterative solve at lambda = 2") {
        const DiscountedSolution sol = solve_system_iterative(kDyadic, 2.0);
        CHECK(sol.u == doctest::Approx(0.125).epsilon(1e-11));
        CHECK(sol.v == doctest::Approx(-0.375).epsilon(1e-11));
        CHECK(std::fabs(sol.residual_u) <= 1e-10);
        CHECK(std::fabs(sol.residual_v) <= 1e-10);
        const DiscountedSolution from_sup = solve_system_iterative(kDyadic, 2.0, {}, StatePair{1.0, 1.0});
        CHECK(from_sup.u == doctest::Approx(0.125).epsilon(1e-11));
        CHECK(from_sup.v == doctest::Approx(-0.375).epsilon(1e-11));
    }

    TEST_CASE("large lambda") {
        const double lambda = 1e6;
        const DiscountedSolution it = solve_system_iterative(kDyadic, lambda);
        const DiscountedSolution red = solve_reduced(kDyadic, lambda);
        CHECK(std::fabs(it.u - red.u) <= 1e-12);
        CHECK(std::fabs(it.v - red.v) <= 1e-12);
        // u ~ k0 d / lambda up to O(lambda^-2)
        CHECK(it.u == doctest::Approx(0.5 / lambda).epsilon(1e-5));
    }

    TEST_CASE("reduction is consistent with the joint solve") {
        std::mt19937_64 rng(29);
        for (int i = 0; i < 60; ++i) {
            const double lambda = oracle::log_uniform(rng, 1e-10, 1e3);
            const DiscountedSolution red = solve_reduced(kDyadic, lambda);
            const DiscountedSolution it = solve_system_iterative(kDyadic, lambda);
            INFO("lambda = " << lambda);
            REQUIRE(std::fabs(red.u - it.u) <= 1e-9);
            REQUIRE(std::fabs(red.v - it.v) <= 1e-9);
            REQUIRE(std::fabs(red.z - solve_scalar(kDyadic, lambda)) <= 1e-15);
        }
    }

    TEST_CASE("solutions lie in the box and satisfy the system") {
        std::mt19937_64 rng(31);
        for (const auto& t : {kDyadic, CouplingTriple::sin_log({0.25, 1, 2, 1.6, 1})}) {
            for (int i = 0; i < 500; ++i) {
                const double lambda = oracle::log_uniform(rng, 1e-14, 1e4);
                const DiscountedSolution sol = solve_reduced(t, lambda);
                INFO("lambda = " << lambda);
                REQUIRE(sol.u >= 0.0);
                REQUIRE(sol.u <= 1.0);
                REQUIRE(sol.v >= -1.0);
                REQUIRE(sol.v <= 0.0);
                REQUIRE(std::fabs(sol.residual_u) <= 1e-10);
                REQUIRE(std::fabs(sol.residual_v) <= 1e-10);
                const Residuals r = system_residuals(t, lambda, sol.u, sol.v);
                REQUIRE(r.u == sol.residual_u);
                REQUIRE(r.v == sol.residual_v);
            }
        }
    }

    TEST_CASE("tiny lambda keeps relative precision in u") {
        for (double lambda : {1e-12, 1e-15, 1e-17}) {
            const DiscountedSolution sol = solve_reduced(kDyadic, lambda);
            CHECK(sol.u > 0.2);
            CHECK(sol.u < 0.35);
            CHECK(sol.z == doctest::Approx(1.0).epsilon(1e-11));
        }
    }
}

TEST_SUITE("comparison") {
    TEST_CASE("constant pair at lambda = 2") {
        CHECK(check_comparison(kDyadic, 2.0, {-1.0, -1.0}, {1.0, 1.0}));
    }

    TEST_CASE("constant pair is not a subsolution at lambda = 1") {
        CHECK_THROWS_AS(check_comparison(kDyadic, 1.0, {-1.0, -1.0}, {1.0, 1.0}), PreconditionError);
    }

    TEST_CASE("non-supersolution is rejected") {
        CHECK_THROWS_AS(check_comparison(kDyadic, 2.0, {-1.0, -1.0}, {-0.5, -0.5}), PreconditionError);
    }

    TEST_CASE("random sub/supersolutions are ordered") {
        std::mt19937_64 rng(37);
        std::uniform_real_distribution<double> coord(-3.0, 3.0);
        int checked = 0;
        for (int i = 0; i < 200000 && checked < 500; ++i) {
            const double lambda = oracle::log_uniform(rng, 1e-3, 1e2);
            const StatePair a{coord(rng), coord(rng)};
            const StatePair b{coord(rng), coord(rng)};
            const Residuals ra = system_residuals(kDyadic, lambda, a.u, a.v);
            const Residuals rb = system_residuals(kDyadic, lambda, b.u, b.v);
            if (ra.u <= 0.0 && ra.v <= 0.0 && rb.u >= 0.0 && rb.v >= 0.0) {
                REQUIRE(check_comparison(kDyadic, lambda, a, b));
                const DiscountedSolution sol = solve_reduced(kDyadic, lambda);
                REQUIRE(a.u <= sol.u + 1e-12);
                REQUIRE(a.v <= sol.v + 1e-12);
                REQUIRE(sol.u <= b.u + 1e-12);
                REQUIRE(sol.v <= b.v + 1e-12);
                ++checked;
            }
        }
        CHECK(checked == 500);
    }
}
