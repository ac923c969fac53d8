#include "tailsum/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tailsum/error.hpp"

namespace tailsum {

ParetoMarginal::ParetoMarginal(double alpha, double scale) : alpha_(alpha), scale_(scale) {
    require(std::isfinite(alpha) && alpha > 0.0, ErrorCode::domain,
            "Pareto tail index must be positive");
    require(std::isfinite(scale) && scale > 0.0, ErrorCode::domain,
            "Pareto scale must be positive");
}

double ParetoMarginal::survival(double x) const {
    require(x >= 0.0, ErrorCode::domain, "survival: x must be nonnegative");
    return std::exp(-alpha_ * std::log1p(x / scale_));
}

double ParetoMarginal::quantile(double q) const {
    require(q >= 0.0 && q < 1.0, ErrorCode::domain, "quantile: q must lie in [0, 1)");
    return scale_ * std::expm1(-std::log1p(-q) / alpha_);
}

double ParetoMarginal::survival_quantile(double p) const {
    require(p > 0.0 && p <= 1.0, ErrorCode::domain, "survival_quantile: p must lie in (0, 1]");
    return scale_ * std::expm1(-std::log(p) / alpha_);
}

double ParetoMarginal::density(double x) const {
    require(x >= 0.0, ErrorCode::domain, "density: x must be nonnegative");
    return alpha_ / scale_ * std::exp(-(alpha_ + 1.0) * std::log1p(x / scale_));
}

double ParetoMarginal::truncated_mean(double t) const {
    require(t > 0.0, ErrorCode::domain, "truncated_mean: t must be positive");
    if (alpha_ == 1.0) return truncated_mean_quadrature(t);
    // -t F̄(t) + ∫_0^t F̄(x) dx
    const double lt = std::log1p(t / scale_);
    const double integral = scale_ * std::expm1((1.0 - alpha_) * lt) / (1.0 - alpha_);
    return integral - t * std::exp(-alpha_ * lt);
}

double ParetoMarginal::truncated_mean_quadrature(double t) const {
    require(t > 0.0, ErrorCode::domain, "truncated_mean: t must be positive");
    return integrate_dF(*this, 0.0, t, [](double x) { return x; });
}

SecondOrderTail ParetoMarginal::second_order_params() const {
    return {alpha_, -1.0, std::pow(scale_, alpha_), -alpha_ * scale_};
}

double integrate_dF(const Marginal& m, double lo, double hi, const Integrand& g) {
    require(lo >= 0.0 && hi >= lo, ErrorCode::domain, "integrate_dF: need 0 <= lo <= hi");
    if (hi == lo) return 0.0;
    const double scale = m.scale();
    const double s_lo = std::log1p(lo / scale);
    const double s_hi = std::log1p(hi / scale);
    auto integrand = [&](double s) {
        const double x = scale * std::expm1(s);
        return g(x) * m.density(x) * scale * std::exp(s);
    };
    // Unit-length pieces in log space keep each Kronrod panel well resolved.
    std::vector<double> cuts{s_lo};
    const double width = s_hi - s_lo;
    const int pieces = std::max(1, static_cast<int>(std::ceil(width / 0.5)));
    for (int i = 1; i < pieces; ++i) cuts.push_back(s_lo + width * i / pieces);
    cuts.push_back(s_hi);
    return integrate_pieces(integrand, cuts);
}

double powered_tail_truncated_mean(const Marginal& m, double t, double a) {
    require(t > 0.0, ErrorCode::domain, "powered_tail_truncated_mean: t must be positive");
    require(a > 0.0 && a <= 1.0, ErrorCode::domain,
            "powered_tail_truncated_mean: exponent must lie in (0, 1]");
    if (a == 1.0) return m.truncated_mean(t);
    // dF̃ = a F̄^(a-1) dF
    return integrate_dF(m, 0.0, t, [&](double x) {
        return x * a * std::pow(m.survival(x), a - 1.0);
    });
}

}  // namespace tailsum
