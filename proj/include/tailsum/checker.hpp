#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tailsum/copulas.hpp"

namespace tailsum {

enum class Verdict { pass, fail, inconclusive };

std::string to_string(Verdict v);

struct CheckGrid {
    std::vector<double> uv = {0.5, 1.0, 2.0, 4.0};
    std::vector<double> v_fixed = {0.1, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> u_perturb = {0.01, 0.05, 0.1};
};

struct CheckOptions {
    /// log10 of the t levels, strictly decreasing. Copulas are evaluated in the log
    /// domain, so levels far below the smallest double are fine.
    std::vector<double> log10_t = {-1, -3, -10, -30, -100, -300, -1000, -3000, -10000};
    CheckGrid grid;
    double tolerance = 1e-3;
    /// Trial tail orders used when no tail function τ is known.
    std::vector<double> trial_kappas = {1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9, 2.0};
};

/// One grid point followed down the t levels.
struct CheckSequence {
    std::string point;
    double target = 0.0;
    std::vector<double> values;
    std::vector<double> deviations;
};

struct CheckResult {
    std::string name;
    Verdict verdict = Verdict::inconclusive;
    /// Worst deviation over the grid at each t level.
    std::vector<double> max_deviation;
    std::vector<CheckSequence> sequences;
    std::optional<double> fitted_c;
    std::optional<double> statistic;
    std::string note;
};

struct AssumptionReport {
    std::vector<double> log10_t;
    CheckGrid grid;
    double tolerance = 1e-3;
    std::vector<CheckResult> checks;

    bool any_fail() const;
    bool any_inconclusive() const;
    const CheckResult* find(const std::string& name) const;
};

/// Tail order check: Ĉ(ut,vt)/(t^κ ℓ(t)) against τ(u,v). With an empty τ the
/// sequence is tested for convergence to a finite nonzero limit instead
/// (successive changes of its logarithm).
CheckResult check_tail_order(const SurvivalCopula& sc, double kappa, const UnivariateFn& ell,
                             const BivariateFn& tau, const CheckOptions& opts);

/// Runs every applicable check. `pickands` enables (evcond) and the DCT envelope.
AssumptionReport check_assumptions(const SurvivalCopula& sc, const TailOrderTraits& tot,
                                   const PartialLimitTraits& plt, const PickandsEV* pickands,
                                   const CheckOptions& opts = {});

/// Builds copula and traits from the descriptor. Families without known traits
/// (barnett) get the trial-κ tail order checks plus the trait-free checks.
AssumptionReport check_assumptions(const CopulaDescriptor& d, const CheckOptions& opts = {});

}  // namespace tailsum
