// Brute-force reference computations used by the tests. Deliberately naive and
// independent of the library's quadrature and finite-difference code.
#pragma once

#include <cmath>
#include <cstddef>

namespace oracle {

template <class F>
double midpoint(F&& f, double a, double b, std::size_t panels) {
    const double h = (b - a) / static_cast<double>(panels);
    long double sum = 0;
    for (std::size_t i = 0; i < panels; ++i) sum += f(a + (static_cast<double>(i) + 0.5) * h);
    return static_cast<double>(sum * h);
}

// I(α,β) = β∫₀^{1/2}((1-y)^{-α}-1)y^{-β-1}dy after y = z^{1/(1-β)}.
inline double integral_I(double alpha, double beta, std::size_t panels = 10'000'000) {
    if (beta == 0) return 0;
    const double e = 1.0 / (1.0 - beta);
    auto g = [&](double z) {
        const double y = std::pow(z, e);
        return std::expm1(-alpha * std::log1p(-y)) / y;
    };
    return beta * e * midpoint(g, 0.0, std::pow(0.5, 1.0 - beta), panels);
}

// Termwise integration of (1-y)^{-2} - 1 = Σ_{k≥1} (k+1) y^k.
inline double integral_I_alpha2_series(double beta) {
    long double sum = 0;
    for (int k = 1; k < 200; ++k)
        sum += (k + 1) * std::pow(0.5L, k - beta) / (k - beta);
    return static_cast<double>(beta * sum);
}

template <class F>
double central_diff(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace oracle
