#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include "doctest.h"
#include "tailsum/asymptotics.hpp"
#include "tailsum/copulas.hpp"
#include "tailsum/error.hpp"
#include "tailsum/marginals.hpp"
#include "tailsum/montecarlo.hpp"
#include "tailsum/parallel.hpp"
#include "tailsum/rng.hpp"

using namespace tailsum;
using doctest::Approx;

namespace {

SimulationConfig config(double phi, double alpha, std::size_t n, std::uint64_t seed) {
    SimulationConfig c;
    c.n = n;
    c.seed = seed;
    c.copula = phi == 1.0 ? CopulaDescriptor{Family::independence}
                          : CopulaDescriptor{Family::gumbel, phi};
    c.alpha = alpha;
    c.scale = 1.0;
    return c;
}

std::vector<double> ranks(const std::vector<double>& x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < idx.size(); ++i) r[idx[i]] = static_cast<double>(i);
    return r;
}

// Kendall's tau without ties by counting inversions with a merge sort (Knight).
double kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
    std::vector<double> ys(idx.size()), buf(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) ys[i] = y[idx[i]];
    long double swaps = 0;
    for (std::size_t width = 1; width < ys.size(); width *= 2) {
        for (std::size_t lo = 0; lo < ys.size(); lo += 2 * width) {
            const std::size_t mid = std::min(lo + width, ys.size());
            const std::size_t hi = std::min(lo + 2 * width, ys.size());
            std::size_t i = lo, j = mid, k = lo;
            while (i < mid && j < hi) {
                if (ys[j] < ys[i]) {
                    swaps += mid - i;
                    buf[k++] = ys[j++];
                } else {
                    buf[k++] = ys[i++];
                }
            }
            while (i < mid) buf[k++] = ys[i++];
            while (j < hi) buf[k++] = ys[j++];
        }
        std::swap(ys, buf);
    }
    const long double n = static_cast<long double>(x.size());
    const long double pairs = n * (n - 1) / 2;
    return static_cast<double>((pairs - 2 * swaps) / pairs);
}

double binomial_se(double p, std::size_t n) { return std::sqrt(p * (1 - p) / double(n)); }

}  // namespace

TEST_CASE("philox4x32-10 known-answer vectors") {
    using P = Philox4x32;
    CHECK(P::block({0, 0, 0, 0}, {0, 0}) ==
          P::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(P::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                   {0xffffffffu, 0xffffffffu}) ==
          P::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(P::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                   {0xa4093822u, 0x299f31d0u}) ==
          P::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("open-unit conversion stays inside (0,1)") {
    CHECK(to_open_unit(0, 0) > 0.0);
    CHECK(to_open_unit(0xffffffffu, 0xffffffffu) < 1.0);
    CHECK(to_open_unit(0x80000000u, 0) == Approx(0.5).epsilon(1e-15));
    CHECK(to_open_unit(0, 0) == 0x1.0p-53);
    CHECK(to_open_unit(0xffffffffu, 0xffffffffu) == 1 - 0x1.0p-53);
}

TEST_CASE("sampler marginals and dependence") {
    const std::size_t n = 400'000;
    for (double phi : {1.0, 10.0}) {
        CAPTURE(phi);
        const auto pairs = sample_pairs(config(phi, 0.8, n, 99));
        REQUIRE(pairs.x.size() == n);
        const ParetoMarginal m(0.8, 1.0);
        const double x99 = m.quantile(0.99);
        for (const auto* col : {&pairs.x, &pairs.y}) {
            const double p = double(std::count_if(col->begin(), col->end(),
                                                  [&](double v) { return v > x99; })) /
                             double(n);
            CHECK(std::fabs(p - 0.01) <= 3 * binomial_se(0.01, n));
        }
        // joint survival Pr(X > F←(1-u), Y > F←(1-v)) against Ĉ(u,v)
        const auto p = phi == 1.0 ? independence_pickands() : gumbel_pickands(phi);
        for (double u : {0.01, 0.05, 0.1})
            for (double v : {0.01, 0.05, 0.1}) {
                const double xu = m.survival_quantile(u), yv = m.survival_quantile(v);
                std::size_t hits = 0;
                for (std::size_t i = 0; i < n; ++i) hits += pairs.x[i] > xu && pairs.y[i] > yv;
                const double target = ev_chat(p, u, v);
                CAPTURE(u);
                CAPTURE(v);
                CHECK(std::fabs(double(hits) / double(n) - target) <=
                      3 * binomial_se(target, n));
            }
    }
}

TEST_CASE("rank statistics") {
    SUBCASE("independence: Spearman correlation vanishes") {
        const std::size_t n = 200'000;
        const auto pairs = sample_pairs(config(1.0, 2.0, n, 5));
        const auto rx = ranks(pairs.x), ry = ranks(pairs.y);
        const double mean = (double(n) - 1) / 2;
        long double sxy = 0, sxx = 0;
        for (std::size_t i = 0; i < n; ++i) {
            sxy += (rx[i] - mean) * (ry[i] - mean);
            sxx += (rx[i] - mean) * (rx[i] - mean);
        }
        CHECK(std::fabs(double(sxy / sxx)) <= 3 / std::sqrt(double(n)));
    }
    SUBCASE("gumbel(10): Kendall tau is 1 - 1/phi") {
        const std::size_t n = 1'000'000;
        const auto pairs = sample_pairs(config(10.0, 0.8, n, 6));
        const double tau = kendall_tau(pairs.x, pairs.y);
        const double nd = double(n);
        const double se = std::sqrt(2 * (2 * nd + 5) / (9 * nd * (nd - 1)));
        CHECK(std::fabs(tau - 0.9) <= 3 * se);
    }
}

TEST_CASE("sampler contract") {
    CHECK_THROWS_AS(sample_pairs(config(0.5, 1.0, 10, 1)), Error);
    auto bad = config(1.0, 1.0, 10, 1);
    bad.copula = {Family::barnett, 1.0, 0.5};
    CHECK_THROWS_AS(sample_pairs(bad), Error);
    CHECK_THROWS_AS(sample_pairs(config(1.0, 1.0, 0, 1)), Error);

    const auto a = sample_pairs(config(10.0, 2.0, 100'000, 42));
    const auto b = sample_pairs(config(10.0, 2.0, 100'000, 42));
    const auto c = sample_pairs(config(10.0, 2.0, 100'000, 43));
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    CHECK(a.x != c.x);

    // prefix property: the stream does not depend on n
    const auto shorter = sample_pairs(config(10.0, 2.0, 70'000, 42));
    CHECK(std::equal(shorter.x.begin(), shorter.x.end(), a.x.begin()));

    const auto z = sample_sums(config(10.0, 2.0, 100'000, 42));
    for (std::size_t i = 0; i < z.size(); i += 997) CHECK(z[i] == a.x[i] + a.y[i]);
}

TEST_CASE("thread count does not change the stream") {
    const char* prev = std::getenv("TAILSUM_THREADS");
    const std::string saved = prev ? prev : "";
    std::vector<std::vector<double>> runs;
    for (const char* threads : {"1", "4", "3"}) {
        setenv("TAILSUM_THREADS", threads, 1);
        CHECK(worker_count() == unsigned(std::atoi(threads)));
        runs.push_back(sample_sums(config(10.0, 0.8, 300'000, 2024)));
    }
    if (prev) setenv("TAILSUM_THREADS", saved.c_str(), 1);
    else unsetenv("TAILSUM_THREADS");
    CHECK(runs[0] == runs[1]);
    CHECK(runs[0] == runs[2]);
}

TEST_CASE("parallel_for visits every index once and forwards errors") {
    setenv("TAILSUM_THREADS", "4", 1);
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    CHECK_THROWS_AS(parallel_for(10,
                                 [](std::size_t i) {
                                     if (i == 7) throw Error(ErrorCode::numeric, "boom");
                                 }),
                    Error);
    unsetenv("TAILSUM_THREADS");
}

TEST_CASE("empirical tail probability") {
    const auto z = sample_sums(config(1.0, 2.0, 1'000'000, 8));
    CHECK(empirical_tailprob(z, 0.0).point == 1.0);
    const auto far = empirical_tailprob(z, 1e30);
    CHECK(far.point == 0.0);
    CHECK(far.std_error == 0.0);
    CHECK_THROWS_AS(empirical_tailprob(std::vector<double>{}, 1.0), Error);

    const auto e = empirical_tailprob(z, 5.0);
    CHECK(e.n == z.size());
    CHECK(e.std_error == Approx(binomial_se(e.point, z.size())).epsilon(1e-15));

    SamplePairs p{{1, 2, 3}, {3, 0.5, 10}}, q{{3, 0.5, 10}, {1, 2, 3}};
    CHECK(empirical_tailprob(p, 3.5).point == empirical_tailprob(q, 3.5).point);
}

TEST_CASE("empirical VaR") {
    std::vector<double> z{5, 3, 1, 4, 2};
    CHECK(empirical_var(z, 0.5).point == 2.0);
    CHECK(empirical_var(z, 1.0).point == 5.0);
    CHECK(empirical_var(z, 0.999).point == 4.0);  // ⌊4.995⌋ = 4
    CHECK_THROWS_AS(empirical_var(z, 0.1), Error);
    std::vector<double> empty;
    CHECK_THROWS_AS(empirical_var(empty, 0.5), Error);

    // ⌊nq⌋ must not lose a rank to rounding: n = 1000, q = 0.29 → 290
    std::vector<double> ramp(1000);
    std::iota(ramp.begin(), ramp.end(), 1.0);
    CHECK(empirical_var(ramp, 0.29).point == 290.0);
    const auto e = empirical_var(ramp, 0.5);
    CHECK(e.ci_lo < e.point);
    CHECK(e.ci_hi > e.point);
    CHECK(e.std_error > 0);
}

TEST_CASE("independence oracle brackets the expansions at n = 10^7") {
    auto z = sample_sums(config(1.0, 2.0, 10'000'000, 12345));
    const ParetoMarginal m(2.0, 1.0);
    const auto tp = empirical_tailprob(z, 99.0);
    const double exp_tp = tailprob_expansion_independence(m, 99.0).value;
    CHECK(exp_tp == Approx(2.0396e-4).epsilon(1e-12));
    CHECK(std::fabs(tp.point - exp_tp) <= 3 * tp.std_error);

    const auto var = empirical_var(z, 0.999);
    const double exp_var = var_expansion_independence(m, 0.999).value;
    CHECK(var.ci_lo <= exp_var);
    CHECK(exp_var <= var.ci_hi);
}

TEST_CASE("sample dump") {
    const std::string path = "tailsum_test_pairs.csv";
    const auto pairs = sample_pairs(config(10.0, 2.0, 5, 1));
    write_samples_csv(path, pairs);
    std::ifstream in(path);
    std::string header, line;
    std::getline(in, header);
    CHECK(header == "x,y");
    int rows = 0;
    while (std::getline(in, line)) {
        double x, y;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf", &x, &y) == 2);
        CHECK(x == pairs.x[rows]);  // 17 significant digits round-trip
        CHECK(y == pairs.y[rows]);
        ++rows;
    }
    CHECK(rows == 5);
    std::remove(path.c_str());
    try {
        write_samples_csv("/nonexistent-dir/x.csv", pairs);
        FAIL("expected an I/O error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io);
    }
}
