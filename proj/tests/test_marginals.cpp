#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "tailsum/error.hpp"
#include "tailsum/marginals.hpp"

using namespace tailsum;
using doctest::Approx;

TEST_CASE("pareto survival") {
    const ParetoMarginal m2(2, 1), m08(0.8, 1);
    CHECK(m2.survival(0) == 1.0);
    CHECK(m2.survival(1) == 0.25);
    CHECK(m08.survival(99) == Approx(std::pow(0.01, 0.8)).epsilon(1e-15));
    CHECK(m08.survival(99) == Approx(0.02512).epsilon(1e-3));
    CHECK_THROWS_AS(m2.survival(-1e-12), Error);
}

TEST_CASE("pareto construction rejects bad parameters") {
    CHECK_THROWS_AS(ParetoMarginal(0, 1), Error);
    CHECK_THROWS_AS(ParetoMarginal(1, -1), Error);
    CHECK_THROWS_AS(ParetoMarginal(NAN, 1), Error);
}

TEST_CASE("pareto quantile") {
    const ParetoMarginal m2(2, 1), m08(0.8, 1);
    CHECK(m2.quantile(0) == 0.0);
    CHECK(m2.quantile(0.75) == Approx(1.0).epsilon(1e-15));
    CHECK(m08.quantile(0.999) == Approx(std::pow(0.001, -1.25) - 1).epsilon(1e-13));
    CHECK(m08.quantile(0.999) == Approx(5622.4).epsilon(1e-4));
    CHECK_THROWS_AS(m2.quantile(1.0), Error);
    CHECK_THROWS_AS(m2.quantile(-0.1), Error);
    // survival_quantile avoids forming 1 - p
    CHECK(m2.survival_quantile(1e-20) == Approx(1e10 - 1).epsilon(1e-14));
}

TEST_CASE("pareto density") {
    const ParetoMarginal m(2, 1);
    CHECK(m.density(0) == 2.0);
    CHECK(m.density(1) == Approx(0.25).epsilon(1e-15));
    CHECK_THROWS_AS(m.density(-1), Error);
    for (double alpha : {0.8, 2.0}) {
        const ParetoMarginal p(alpha, 1.5);
        // x = s/(1-s) maps [0,1) onto [0,∞)
        const double total = oracle::midpoint(
            [&](double s) { return p.density(s / (1 - s)) / ((1 - s) * (1 - s)); }, 0, 1,
            2'000'000);
        CHECK(total == Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("pareto truncated mean") {
    const ParetoMarginal m(2, 1);
    CHECK(m.truncated_mean(1e-12) == Approx(0).epsilon(1e-20));
    CHECK(m.truncated_mean(1) == Approx(0.25).epsilon(1e-14));
    CHECK(m.truncated_mean(99) == Approx(0.9801).epsilon(1e-14));
    CHECK_THROWS_AS(m.truncated_mean(0), Error);

    SUBCASE("closed form and quadrature agree") {
        for (double alpha : {0.5, 0.8, 1.5, 2.0, 3.0})
            for (double t : {0.1, 1.0, 99.0, 1e4}) {
                const ParetoMarginal p(alpha, 2.0);
                CHECK(p.truncated_mean(t) ==
                      Approx(p.truncated_mean_quadrature(t)).epsilon(1e-10));
            }
    }
    SUBCASE("alpha = 1 has no power-law antiderivative") {
        const ParetoMarginal p(1, 1);
        for (double t : {0.5, 10.0, 1e5})
            CHECK(p.truncated_mean(t) == Approx(std::log1p(t) - t / (1 + t)).epsilon(1e-10));
    }
    SUBCASE("truncated mean plus tail mass approaches the mean") {
        const ParetoMarginal p(2.5, 1);
        const double mean = 1.0 / 1.5;
        double prev = 0;
        for (double t = 1; t < 1e8; t *= 4) {
            const double v = p.truncated_mean(t) + t * p.survival(t);
            CHECK(v >= prev);
            prev = v;
        }
        CHECK(prev == Approx(mean).epsilon(1e-6));
    }
}

TEST_CASE("powered tail truncated mean") {
    const ParetoMarginal m(2, 1);
    CHECK(powered_tail_truncated_mean(m, 7.0, 1.0) == Approx(m.truncated_mean(7.0)).epsilon(1e-10));
    // a·F̄^{a-1}·f = (1+x)^{-2} for α=2, a=1/2
    const double oracle =
        oracle::midpoint([](double x) { return x / ((1 + x) * (1 + x)); }, 0, 1, 1'000'000);
    CHECK(powered_tail_truncated_mean(m, 1.0, 0.5) == Approx(oracle).epsilon(1e-10));
    CHECK(powered_tail_truncated_mean(m, 1e-9, 0.5) == Approx(0).epsilon(1e-15));
    CHECK_THROWS_AS(powered_tail_truncated_mean(m, 1.0, 0.0), Error);
    CHECK_THROWS_AS(powered_tail_truncated_mean(m, 1.0, 1.5), Error);
}

TEST_CASE("second-order parameters") {
    const auto p2 = ParetoMarginal(2, 1).second_order_params();
    CHECK(p2.alpha == 2);
    CHECK(p2.rho == -1);
    CHECK(p2.c_scale == 1);
    CHECK(p2.b_coeff == -2);
    const auto p08 = ParetoMarginal(0.8, 1).second_order_params();
    CHECK(p08.rho == -1);
    CHECK(p08.c_scale == 1);
    CHECK(p08.b_coeff == Approx(-0.8));

    for (double alpha : {0.8, 2.0}) {
        const ParetoMarginal m(alpha, 1.3);
        const auto s = m.second_order_params();
        const double x = 1e3;
        const double lhs = m.survival(x) * std::pow(x, alpha) / s.c_scale - 1;
        CHECK(lhs == Approx(s.b_coeff * std::pow(x, s.rho)).epsilon(0.01));

        // remainder is o(x^ρ): ratio shrinks along a doubling grid
        double prev = INFINITY;
        for (double y = 1e2; y < 1e6; y *= 2) {
            const double r = std::fabs(m.survival(y) * std::pow(y, alpha) / s.c_scale - 1 -
                                       s.b_coeff * std::pow(y, s.rho)) /
                             std::pow(y, s.rho);
            CHECK(r < prev);
            prev = r;
        }
    }
}

TEST_CASE("marginal properties") {
    for (double alpha : {0.8, 2.0}) {
        const ParetoMarginal m(alpha, 1);
        double prev = 1.0;
        for (double x = 1e-3; x < 1e9; x *= 1.7) {
            const double s = m.survival(x);
            CHECK(s > 0);
            CHECK(s < prev);
            prev = s;
            CHECK(m.survival_quantile(s) == Approx(x).epsilon(1e-10));
            if (x < 1e5) CHECK(m.quantile(1 - s) == Approx(x).epsilon(std::max(1e-10, 1e-15 / s)));
        }
        for (double lambda : {2.0, 10.0}) {
            double dev = INFINITY;
            for (double x = 10; x < 1e7; x *= 2) {
                const double d =
                    std::fabs(m.survival(lambda * x) / m.survival(x) - std::pow(lambda, -alpha));
                CHECK(d < dev);
                dev = d;
            }
        }
    }
}
