#include <cmath>
#include <string>

#include "doctest.h"
#include "tailsum/checker.hpp"
#include "tailsum/copulas.hpp"
#include "tailsum/error.hpp"

using namespace tailsum;

namespace {

void require_evidence(const AssumptionReport& r) {
    CHECK(r.log10_t.size() >= 3);
    for (const auto& c : r.checks) {
        CAPTURE(c.name);
        CHECK(c.max_deviation.size() == r.log10_t.size());
        CHECK_FALSE(c.sequences.empty());
        for (const auto& s : c.sequences) CHECK(s.values.size() == s.deviations.size());
    }
}

}  // namespace

TEST_CASE("independence passes every check") {
    const auto r = check_assumptions(CopulaDescriptor{Family::independence});
    require_evidence(r);
    CHECK_FALSE(r.any_fail());
    CHECK_FALSE(r.any_inconclusive());
    for (const char* name : {"A2", "A3", "A4", "evcond", "taylor", "dct_envelope", "symmetry"}) {
        CAPTURE(name);
        const auto* c = r.find(name);
        REQUIRE(c != nullptr);
        CHECK(c->verdict == Verdict::pass);
        CHECK(c->max_deviation.back() < 1e-10);
    }
    CHECK(*r.find("A3")->fitted_c == doctest::Approx(1.0));
}

TEST_CASE("gumbel(10) passes every check") {
    const auto r = check_assumptions(CopulaDescriptor{Family::gumbel, 10.0});
    require_evidence(r);
    for (const auto& c : r.checks) {
        CAPTURE(c.name);
        CHECK(c.verdict == Verdict::pass);
        CHECK(c.max_deviation.back() < 1e-3);
    }
    REQUIRE(r.find("evcond")->fitted_c.has_value());
    CHECK(*r.find("evcond")->fitted_c > 0);
}

TEST_CASE("a wrong tail order is rejected") {
    const auto sc = survival_copula(CopulaDescriptor{Family::gumbel, 10.0});
    const auto tot = tail_order_traits(CopulaDescriptor{Family::gumbel, 10.0});
    const auto good = check_tail_order(sc, tot.kappa, tot.ell, tot.tau, {});
    CHECK(good.verdict == Verdict::pass);
    const auto bad = check_tail_order(sc, 2.0, tot.ell, tot.tau, {});
    CHECK(bad.verdict == Verdict::fail);
}

TEST_CASE("the Barnett copula admits no tail order") {
    const auto r = check_assumptions(CopulaDescriptor{Family::barnett, 1.0, 0.5});
    int trials = 0;
    for (const auto& c : r.checks)
        if (c.name.rfind("A2[kappa=", 0) == 0) {
            CAPTURE(c.name);
            CHECK(c.verdict == Verdict::fail);
            ++trials;
        }
    CHECK(trials == 11);
    CHECK(r.any_fail());
}

TEST_CASE("inconclusive is never reported as a pass") {
    const auto r = check_assumptions(CopulaDescriptor{Family::barnett, 1.0, 0.5});
    const auto* t = r.find("taylor");
    REQUIRE(t != nullptr);
    CHECK(t->verdict != Verdict::pass);
}

TEST_CASE("checker configuration errors") {
    CheckOptions o;
    o.log10_t = {-1, -3, -2};
    CHECK_THROWS_AS(check_assumptions(CopulaDescriptor{Family::independence}, o), Error);
    o.log10_t = {-1, -2};
    CHECK_THROWS_AS(check_assumptions(CopulaDescriptor{Family::independence}, o), Error);
    o.log10_t = {1, -2, -3};
    CHECK_THROWS_AS(check_assumptions(CopulaDescriptor{Family::independence}, o), Error);
    try {
        o.log10_t = {-1, -1, -3};
        check_assumptions(CopulaDescriptor{Family::independence}, o);
        FAIL("expected a config error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::config);
    }
}

TEST_CASE("shallow decades are too short for gumbel(10)") {
    // Ĉ(ut,vt)/t^κ converges like 1/log(1/t); the decades 1e-1..1e-7 stay far off
    CheckOptions o;
    o.log10_t = {-1, -2, -3, -4, -5, -6, -7};
    const auto r = check_assumptions(CopulaDescriptor{Family::gumbel, 10.0}, o);
    CHECK(r.find("A2")->verdict == Verdict::fail);
    CHECK(r.find("A2")->max_deviation.back() > 0.1);
}
