#pragma once

#include <functional>
#include <optional>
#include <string>

namespace tailsum {

using BivariateFn = std::function<double(double, double)>;
using UnivariateFn = std::function<double(double)>;

enum class Family {
    independence,
    gumbel,
    comonotone,
    /// uv·exp(-σ ln u ln v); ships only as a negative case for the assumption checker.
    barnett,
    /// User-supplied traits; evaluators fall back to numerical limits.
    custom,
};

std::string to_string(Family family);
Family parse_family(const std::string& name);

struct CopulaDescriptor {
    Family family = Family::independence;
    double phi = 1.0;    // gumbel dependence parameter
    double sigma = 0.0;  // barnett parameter
};

/// A survival copula Ĉ and its partial derivative in the second argument.
///
/// The optional log-domain evaluators take (log u, log v) and return log Ĉ and
/// log Ĉ_v. They let the assumption checker follow t far below the smallest double.
struct SurvivalCopula {
    BivariateFn chat;
    BivariateFn chat_v;
    BivariateFn log_chat;
    BivariateFn log_chat_v;
    /// True when chat_v is a finite-difference approximation.
    bool chat_v_numeric = false;

    double log_value(double log_u, double log_v) const;
    double log_partial_v(double log_u, double log_v) const;
};

/// Builds Ĉ(u,v) = u + v - 1 + C(1-u, 1-v). When `c_partial_v` (∂C/∂v) is given,
/// Ĉ_v follows from the chain rule; otherwise a clamped central difference with
/// step 1e-6 is used. Throws Error(domain) when C violates the copula axioms on
/// a validation grid.
SurvivalCopula survival_from_copula(BivariateFn c, BivariateFn c_partial_v = {});

/// Pickands dependence function of a symmetric extreme-value copula,
/// C_EV(u,v) = exp(-A(-log u, -log v)).
struct PickandsEV {
    BivariateFn a_fn;
    BivariateFn a1;
    BivariateFn a2;
    /// log A₂, evaluated without underflow where the family allows it.
    BivariateFn log_a2;
    Family family = Family::gumbel;
    double phi_g = 1.0;
    /// Closed-form A₂(1,0) when the family provides it.
    std::optional<double> a2_at_1_0_exact;

    double a_11() const { return a_fn(1.0, 1.0); }
    double a1_11() const;
    /// A₂(1,0): closed form if available, else the limit of A₂(1,v) over
    /// v ∈ {1e-4, ..., 1e-10}, declared 0 below 1e-8.
    double a2_10() const;
};

/// Numerical limit lim_{v→0} A₂(1,v) with the 1e-8 zero threshold.
double a2_limit_at_zero(const BivariateFn& a2);

PickandsEV gumbel_pickands(double phi_g);
PickandsEV independence_pickands();
PickandsEV comonotone_pickands();

double ev_chat(const PickandsEV& p, double u, double v);
double ev_chat_v(const PickandsEV& p, double u, double v);

SurvivalCopula survival_copula(const PickandsEV& p);
SurvivalCopula survival_copula(const CopulaDescriptor& d);

/// Pickands function for the extreme-value families; Error(unsupported) otherwise.
PickandsEV pickands_for(const CopulaDescriptor& d);

/// Tail order data: Ĉ(ut,vt) / (t^κ ℓ(t)) → τ(u,v) as t ↓ 0.
struct TailOrderTraits {
    double kappa = 2.0;
    UnivariateFn ell;
    BivariateFn tau;
    BivariateFn tau_v;
    Family family = Family::independence;
    /// A₁(1,1) for extreme-value families; τ = (uv)^a1_11.
    double a1_11 = 1.0;
};

/// Partial-derivative limit data: Ĉ_v(ut,v) / (t^θ h(t)) → φ(u,v).
struct PartialLimitTraits {
    double theta_exp = 1.0;
    UnivariateFn h;
    BivariateFn varphi;
    double beta = 0.0;
    bool degenerate = false;
    /// A₂(1,0) for extreme-value families (1 for independence).
    double a2_10 = 1.0;
};

TailOrderTraits tail_order_traits(const CopulaDescriptor& d);
TailOrderTraits tail_order_traits(const PickandsEV& p);
PartialLimitTraits partial_limit_traits(const CopulaDescriptor& d);
PartialLimitTraits partial_limit_traits(const PickandsEV& p);

}  // namespace tailsum
