#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tailsum/copulas.hpp"

namespace tailsum {

struct SimulationConfig {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    CopulaDescriptor copula;
    double alpha = 1.0;
    double scale = 1.0;
    /// Samples per deterministic work unit.
    std::size_t chunk = std::size_t{1} << 16;
};

struct MCEstimate {
    double point = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

struct SamplePairs {
    std::vector<double> x;
    std::vector<double> y;
};

/// Pareto pairs whose survival copula is the configured Gumbel (or independence)
/// copula: Pr(X > x, Y > y) = Ĉ(F̄(x), F̄(y)). Bit-identical for a given config
/// whatever the worker count.
SamplePairs sample_pairs(const SimulationConfig& cfg);

/// Z = X + Y for the same stream as sample_pairs, without storing the pairs.
std::vector<double> sample_sums(const SimulationConfig& cfg);

/// Fraction of z above t with binomial standard error; CI is point ± 3 stderr.
MCEstimate empirical_tailprob(std::span<const double> z, double t);
MCEstimate empirical_tailprob(const SamplePairs& pairs, double t);

/// Z_{⌊nq⌋,n} by selection. The CI holds the order statistics at
/// nq ∓ z sqrt(nq(1-q)); std_error is half its width divided by z.
/// Reorders `z`.
MCEstimate empirical_var(std::vector<double>& z, double q, double zscore = 3.0);

/// CSV with header "x,y", 17 significant digits.
void write_samples_csv(const std::string& path, const SamplePairs& pairs);

}  // namespace tailsum
