#pragma once

#include <functional>
#include <span>

namespace tailsum {

using Integrand = std::function<double(double)>;

/// Adaptive 15-point Gauss-Kronrod integration of `f` over [a, b].
/// Throws Error(numeric) when the estimated error stays above the target.
double integrate(const Integrand& f, double a, double b, double rel_tol = 1e-12);

/// Same, but integrates piecewise over consecutive breakpoints (sorted ascending).
double integrate_pieces(const Integrand& f, std::span<const double> breakpoints,
                        double rel_tol = 1e-12);

}  // namespace tailsum
