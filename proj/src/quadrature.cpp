#include "tailsum/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "tailsum/error.hpp"

namespace tailsum {
namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;

constexpr int kMaxPanels = 4000;

struct Panel {
    double a, b, value, error, l1;
};

// One 15-point Kronrod evaluation. Boost (1.74) reports the error and L1 of the
// rule mapped onto [-1, 1] without the half-width factor, so rescale here.
Panel rule(const Integrand& f, double a, double b) {
    double err = 0.0, l1 = 0.0;
    const double v = Rule::integrate(f, a, b, 0, 0.0, &err, &l1);
    const double half = 0.5 * (b - a);
    return {a, b, v, err * half, l1};
}

}  // namespace

double integrate(const Integrand& f, double a, double b, double rel_tol) {
    if (a == b) return 0.0;
    if (b < a) return -integrate(f, b, a, rel_tol);

    std::vector<Panel> panels{rule(f, a, b)};
    auto sum = [&](auto field) {
        double s = 0.0;
        for (const Panel& p : panels) s += p.*field;
        return s;
    };
    double value = panels[0].value, error = panels[0].error, l1 = panels[0].l1;
    const double eps = std::numeric_limits<double>::epsilon();
    while (error > std::max(rel_tol * std::fabs(value), 50 * eps * l1) &&
           static_cast<int>(panels.size()) < kMaxPanels) {
        auto worst = std::max_element(panels.begin(), panels.end(),
                                      [](const Panel& x, const Panel& y) { return x.error < y.error; });
        const double mid = 0.5 * (worst->a + worst->b);
        if (!(mid > worst->a && mid < worst->b)) break;  // at floating-point resolution
        const Panel left = rule(f, worst->a, mid), right = rule(f, mid, worst->b);
        *worst = left;
        panels.push_back(right);
        value = sum(&Panel::value);
        error = sum(&Panel::error);
        l1 = sum(&Panel::l1);
    }
    if (!std::isfinite(value)) {
        char msg[128];
        std::snprintf(msg, sizeof msg, "quadrature produced a non-finite value on [%.6g, %.6g]", a,
                      b);
        fail(ErrorCode::numeric, msg);
    }
    // Accept a few orders of slack over the request; the Kronrod estimate is
    // pessimistic for smooth integrands.
    if (error > std::max(1e-7 * l1, 1e-300)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "quadrature did not converge on [%.6g, %.6g]: error estimate %.3e vs L1 %.3e",
                      a, b, error, l1);
        fail(ErrorCode::numeric, msg);
    }
    return value;
}

double integrate_pieces(const Integrand& f, std::span<const double> breakpoints, double rel_tol) {
    double total = 0.0;
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        total += integrate(f, breakpoints[i - 1], breakpoints[i], rel_tol);
    return total;
}

}  // namespace tailsum
