#pragma once

#include "tailsum/quadrature.hpp"

namespace tailsum {

/// Second-order regular variation of a survival function:
/// F̄(x) = c_scale * x^-alpha * (1 + b_coeff * x^rho * (1 + o(1))).
struct SecondOrderTail {
    double alpha = 0.0;
    double rho = 0.0;
    double c_scale = 0.0;
    double b_coeff = 0.0;
};

/// Distribution contract for a nonnegative, continuous, regularly varying risk.
/// Implementations are immutable and safe to share across threads.
class Marginal {
public:
    virtual ~Marginal() = default;

    virtual double survival(double x) const = 0;
    virtual double quantile(double q) const = 0;
    /// F←(1 - p), evaluated without forming 1 - p.
    virtual double survival_quantile(double p) const = 0;
    virtual double density(double x) const = 0;
    /// ∫_0^t x dF(x).
    virtual double truncated_mean(double t) const = 0;

    virtual double tail_index() const = 0;
    /// Characteristic scale used for log-spaced quadrature in x.
    virtual double scale() const = 0;
    virtual SecondOrderTail second_order_params() const = 0;
};

/// F(x) = 1 - (scale / (x + scale))^alpha on [0, ∞).
class ParetoMarginal final : public Marginal {
public:
    ParetoMarginal(double alpha, double scale);

    double survival(double x) const override;
    double quantile(double q) const override;
    double survival_quantile(double p) const override;
    double density(double x) const override;
    double truncated_mean(double t) const override;

    double tail_index() const override { return alpha_; }
    double scale() const override { return scale_; }
    double alpha() const { return alpha_; }

    /// rho = -1, c_scale = scale^alpha, b_coeff = -alpha * scale.
    SecondOrderTail second_order_params() const override;

    /// Quadrature route for ∫_0^t x dF(x); the closed form is used by truncated_mean
    /// whenever alpha != 1.
    double truncated_mean_quadrature(double t) const;

private:
    double alpha_;
    double scale_;
};

/// ∫_lo^hi g(x) dF(x), integrated in s = log(1 + x/scale) so that heavy tails and
/// wide ranges stay well conditioned.
double integrate_dF(const Marginal& m, double lo, double hi, const Integrand& g);

/// ∫_0^t x dF̃(x) where F̃ = 1 - F̄^a, 0 < a <= 1.
double powered_tail_truncated_mean(const Marginal& m, double t, double a);

}  // namespace tailsum
