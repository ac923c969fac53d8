#pragma once

#include <string>
#include <vector>

#include "tailsum/copulas.hpp"
#include "tailsum/marginals.hpp"

namespace tailsum {

/// I(α,β) = β ∫_0^{1/2} ((1-y)^{-α} - 1) y^{-β-1} dy for α > 0, 0 <= β < 1.
/// Throws Error(numeric) for β >= 1 (divergent) and Error(domain) for β < 0.
double integral_I(double alpha, double beta);

/// η(δ) = α ∫_δ^{1/2} (τ_v((1-y)^{-α}, y^{-α}) - τ_v(1, y^{-α})) y^{-α-1} dy.
double eta_delta(const TailOrderTraits& tot, double alpha, double delta);

struct EtaLimit {
    bool finite = false;
    double value = 0.0;  // +inf when not finite
};

/// η = lim_{δ↓0} η(δ). Closed form for the shipped families, numerical limit
/// over δ ∈ {1e-2, 1e-3, 1e-4} otherwise (divergent when it grows by more than 2×).
EtaLimit eta_limit(const TailOrderTraits& tot, double alpha);

/// D(δ,t) = ∫_δ^{1/2} (τ_v((1-y)^{-α}, y^{-α}) - τ_v(1, y^{-α})) dF(ty).
double D_delta(const TailOrderTraits& tot, const Marginal& m, double delta, double t);

/// Δ(t) = ∫_0^{1/2} ((1-y)^{-αθ} - 1) φ(1, F̄(ty)) dF(ty).
double Delta_t(const PartialLimitTraits& plt, const Marginal& m, double t);

enum class EvCase {
    all_three,  // C1 ∩ C2 ∩ C3
    c1_only,    // C1 \ (C2 ∩ C3)
    not_c1,     // C1 complement
};

struct CaseLabel {
    EvCase primary = EvCase::all_three;
    bool in_c1 = false;
    bool in_c2 = false;
    bool in_c3 = false;
    /// A(1,1) = A₂(1,0) + 1.
    bool indicator = false;
    std::vector<std::string> warnings;

    std::string str() const;
};

/// C1: α < 1/A₂(1,0); C2: α < 1/A₁(1,1); C3: A(1,1) < A₂(1,0) + 1.
CaseLabel classify_case(double alpha, const PickandsEV& p);

/// How to treat a ρ-threshold equality in the VaR expansions.
enum class BoundaryPolicy {
    combine,  // both competing second-order terms are of the same order: add them
    strict,   // refuse with Error(boundary)
};

/// Which generic expansion to use for user-supplied traits.
enum class GeneralBranch {
    automatic,      // decide from η, D(δ,t) and α(1-β)
    eta_route,      // 2F̄ + Δ₁ F̄^κ ℓ(F̄)
    partial_route,  // 2F̄ + Δ₂ F̄^κ ℓ(F̄) + 2Δ(t) F̄^θ h(F̄)
};

std::string to_string(GeneralBranch b);

struct ExpansionTerm {
    std::string name;
    double coefficient = 0.0;
    /// Power of F̄(t) (tail probabilities) or of (1-q) / VaR_q(X) (VaR); 0 when the
    /// term carries a t-dependent factor instead.
    double exponent = 0.0;
    /// Extra t-dependent factor, e.g. "mu_F(t)/t"; empty if none.
    std::string factor;
    double value = 0.0;
    /// Of strictly smaller order than another term; recorded but not summed.
    bool dominated = false;
};

struct Candidate {
    std::string name;
    double value = 0.0;
};

struct Expansion {
    /// 2F̄(t) for tail probabilities, 2^{1/α} VaR_q(X) for VaR.
    double first_order = 0.0;
    std::vector<ExpansionTerm> terms;
    std::string label;
    std::vector<std::string> diagnostics;
    /// Alternative values for unresolved cases (degenerate extreme-value copulas).
    std::vector<Candidate> candidates;
    double value = 0.0;
};

/// Independence copula: 2F̄ + (2I(α,α) + 2^{2α} - 2^{α+1})F̄² for α < 1,
/// 2F̄ + 2α t^{-1} μ_F(t) F̄ for α >= 1. Requires t above the marginal median.
Expansion tailprob_expansion_independence(const Marginal& m, double t);

/// Extreme-value survival copula. Degenerate partial limits (A₂(1,0) = 0, as for
/// Gumbel with φ > 1) are resolved through the generic expansion with the copula's
/// own traits; the literal value 2F̄ is kept as a candidate.
Expansion tailprob_expansion_ev(const Marginal& m, const PickandsEV& p, double t);

Expansion tailprob_expansion_general(const Marginal& m, const TailOrderTraits& tot,
                                     const PartialLimitTraits& plt, double t,
                                     GeneralBranch branch = GeneralBranch::automatic);

/// Requires 0.5 < q < 1.
Expansion var_expansion_independence(const Marginal& m, double q,
                                     BoundaryPolicy policy = BoundaryPolicy::combine);
Expansion var_expansion_ev(const Marginal& m, const PickandsEV& p, double q,
                           BoundaryPolicy policy = BoundaryPolicy::combine);

struct InversionCheck {
    double formula = 0.0;
    double inverted = 0.0;
    /// (formula - inverted) / inverted.
    double discrepancy = 0.0;
};

/// Solves tailprob_expansion_ev(t) = 1 - q by bisection and compares with the VaR formula.
InversionCheck var_inversion_check(const Marginal& m, const PickandsEV& p, double q,
                                   BoundaryPolicy policy = BoundaryPolicy::combine);

}  // namespace tailsum
