#include <cmath>
#include <cstring>
#include <string>
#include <thread>

#include "doctest.h"
#include "tailsum/tailsum.h"

using doctest::Approx;

namespace {

ts_model* model(double alpha, ts_family fam, double param) {
    ts_model* m = nullptr;
    REQUIRE(ts_model_create(alpha, 1.0, fam, param, &m) == TS_OK);
    REQUIRE(m != nullptr);
    return m;
}

}  // namespace

TEST_CASE("c api: metadata and parsing") {
    CHECK(std::strlen(ts_version()) > 0);
    CHECK(std::string(ts_status_name(TS_ERR_BOUNDARY)) == "case boundary");
    ts_family f;
    CHECK(ts_family_parse("gumbel", &f) == TS_OK);
    CHECK(f == TS_FAMILY_GUMBEL);
    CHECK(ts_family_parse("barnett", &f) == TS_OK);
    CHECK(f == TS_FAMILY_BARNETT);
    CHECK(ts_family_parse("frank", &f) == TS_ERR_CONFIG);
    CHECK(std::string(ts_last_error()).find("frank") != std::string::npos);
    CHECK(ts_family_parse(nullptr, &f) == TS_ERR_NULL);
}

TEST_CASE("c api: model validation") {
    ts_model* m = reinterpret_cast<ts_model*>(0x1);
    CHECK(ts_model_create(2.0, 1.0, TS_FAMILY_GUMBEL, 0.5, &m) == TS_ERR_DOMAIN);
    CHECK(m == nullptr);
    CHECK(ts_model_create(-1.0, 1.0, TS_FAMILY_INDEPENDENCE, 0, &m) == TS_ERR_DOMAIN);
    CHECK(ts_model_create(1.0, 1.0, TS_FAMILY_BARNETT, 0.0, &m) == TS_ERR_DOMAIN);
    CHECK(ts_model_create(1.0, 1.0, static_cast<ts_family>(42), 0.0, &m) == TS_ERR_CONFIG);
    CHECK(ts_model_create(1.0, 1.0, TS_FAMILY_INDEPENDENCE, 0.0, nullptr) == TS_ERR_NULL);
    ts_model_destroy(nullptr);
}

TEST_CASE("c api: marginal and integral") {
    ts_model* m = model(2.0, TS_FAMILY_INDEPENDENCE, 0);
    double v;
    CHECK(ts_marginal_survival(m, 1.0, &v) == TS_OK);
    CHECK(v == Approx(0.25));
    CHECK(ts_marginal_quantile(m, 0.75, &v) == TS_OK);
    CHECK(v == Approx(1.0));
    CHECK(ts_marginal_survival_quantile(m, 0.25, &v) == TS_OK);
    CHECK(v == Approx(1.0));
    CHECK(ts_marginal_quantile(m, 1.5, &v) == TS_ERR_DOMAIN);
    CHECK(ts_marginal_survival(nullptr, 1.0, &v) == TS_ERR_NULL);
    ts_model_destroy(m);

    CHECK(ts_integral_I(0.8, 0.8, &v) == TS_OK);
    CHECK(v > 3.0);
    CHECK(ts_integral_I(0.8, 1.0, &v) == TS_ERR_NUMERIC);
}

TEST_CASE("c api: expansions") {
    ts_model* g1 = model(2.0, TS_FAMILY_GUMBEL, 1.0);
    ts_expansion e;
    REQUIRE(ts_tailprob_expansion(g1, 99.0, &e) == TS_OK);
    CHECK(e.value == Approx(2.0396e-4).epsilon(1e-12));
    CHECK(e.first_order == Approx(2e-4).epsilon(1e-14));
    CHECK(std::string(e.case_label) == "C1ᶜ");

    REQUIRE(ts_var_expansion(g1, 0.999, TS_BOUNDARY_COMBINE, &e) == TS_OK);
    CHECK(e.value > e.first_order);
    CHECK(ts_var_expansion(g1, 0.999, TS_BOUNDARY_STRICT, &e) == TS_ERR_BOUNDARY);
    CHECK(std::string(ts_last_error()).find("rho") != std::string::npos);
    ts_model_destroy(g1);

    ts_model* g10 = model(0.8, TS_FAMILY_GUMBEL, 10.0);
    REQUIRE(ts_tailprob_expansion(g10, 5622.4, &e) == TS_OK);
    CHECK(e.n_candidates >= 3);
    CHECK(std::strlen(e.diagnostics) > 0);
    ts_model_destroy(g10);

    ts_model* com = model(2.0, TS_FAMILY_COMONOTONE, 0);
    REQUIRE(ts_tailprob_expansion(com, 1e4, &e) == TS_OK);
    CHECK(e.value == Approx(4.0 * std::pow(1.0 / 10001.0, 2)).epsilon(1e-8));
    CHECK(ts_var_expansion(com, 0.99, TS_BOUNDARY_COMBINE, &e) == TS_ERR_UNSUPPORTED);
    ts_model_destroy(com);

    ts_model* bar = model(2.0, TS_FAMILY_BARNETT, 0.5);
    CHECK(ts_tailprob_expansion(bar, 100, &e) == TS_ERR_UNSUPPORTED);
    ts_model_destroy(bar);
}

TEST_CASE("c api: simulation") {
    ts_model* m = model(2.0, TS_FAMILY_GUMBEL, 10.0);
    ts_sample* s = nullptr;
    REQUIRE(ts_simulate(m, 200000, 42, &s) == TS_OK);
    ts_estimate a, b;
    REQUIRE(ts_sample_tailprob(s, 30.0, &a) == TS_OK);
    CHECK(a.n == 200000);
    CHECK(a.seed == 42);
    CHECK(a.point > 0);
    CHECK(a.ci_lo < a.point);
    REQUIRE(ts_sample_var(s, 0.99, &b) == TS_OK);
    CHECK(b.ci_lo <= b.point);
    CHECK(b.point <= b.ci_hi);
    // selection reorders the sample but does not change its content
    ts_estimate again;
    REQUIRE(ts_sample_tailprob(s, 30.0, &again) == TS_OK);
    CHECK(again.point == a.point);
    CHECK(ts_sample_var(s, 0.0, &b) == TS_ERR_DOMAIN);
    ts_sample_destroy(s);

    CHECK(ts_write_pairs_csv(m, 10, 1, "/nonexistent-dir/p.csv") == TS_ERR_IO);
    ts_model_destroy(m);

    ts_model* bar = model(2.0, TS_FAMILY_BARNETT, 0.5);
    CHECK(ts_simulate(bar, 1000, 1, &s) == TS_ERR_UNSUPPORTED);
    CHECK(s == nullptr);
    ts_model_destroy(bar);
}

TEST_CASE("c api: checker report") {
    ts_model* m = model(1.0, TS_FAMILY_GUMBEL, 10.0);
    ts_check_report* r = nullptr;
    REQUIRE(ts_check_run(m, nullptr, 0, 0.0, &r) == TS_OK);
    CHECK(ts_check_any_fail(r) == 0);
    const size_t levels = ts_check_level_count(r);
    CHECK(levels == 9);
    CHECK(ts_check_level(r, 0) == -1.0);
    CHECK(std::isnan(ts_check_level(r, 99)));
    bool saw_evcond = false;
    for (size_t i = 0; i < ts_check_count(r); ++i) {
        const char *name, *note;
        ts_verdict v;
        double c, stat, dev;
        REQUIRE(ts_check_info(r, i, &name, &v, &c, &stat, &note) == TS_OK);
        CHECK(v == TS_VERDICT_PASS);
        REQUIRE(ts_check_max_deviation(r, i, levels - 1, &dev) == TS_OK);
        CHECK(dev < 1e-3);
        if (std::string(name) == "evcond") {
            saw_evcond = true;
            CHECK(c > 0);
        }
        REQUIRE(ts_check_sequence_count(r, i) > 0);
        const char* point;
        double target, value;
        CHECK(ts_check_sequence(r, i, 0, &point, &target) == TS_OK);
        CHECK(ts_check_sequence_value(r, i, 0, levels - 1, &value, &dev) == TS_OK);
        CHECK(ts_check_sequence_value(r, i, 0, levels, &value, &dev) == TS_ERR_DOMAIN);
    }
    CHECK(saw_evcond);
    CHECK(ts_check_info(r, 999, nullptr, nullptr, nullptr, nullptr, nullptr) == TS_ERR_DOMAIN);
    ts_check_report_destroy(r);

    const double bad[] = {-1, -2};
    CHECK(ts_check_run(m, bad, 2, 0.0, &r) == TS_ERR_CONFIG);
    CHECK(r == nullptr);
    ts_model_destroy(m);
}

TEST_CASE("c api: last error is per thread") {
    ts_family f;
    CHECK(ts_family_parse("nope", &f) == TS_ERR_CONFIG);
    std::string other;
    std::thread([&] {
        ts_family g;
        ts_family_parse("gumbel", &g);
        other = ts_last_error();
    }).join();
    CHECK(other.empty());
    CHECK(std::string(ts_last_error()).find("nope") != std::string::npos);
}
