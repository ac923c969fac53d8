#include "tailsum/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "tailsum/error.hpp"
#include "tailsum/parallel.hpp"
#include "tailsum/rng.hpp"

namespace tailsum {

namespace {

void validate(const SimulationConfig& cfg) {
    require(cfg.n >= 1, ErrorCode::config, "simulation: n must be at least 1");
    require(cfg.chunk >= 1, ErrorCode::config, "simulation: chunk must be at least 1");
    require(std::isfinite(cfg.alpha) && cfg.alpha > 0.0, ErrorCode::domain,
            "simulation: alpha must be positive");
    require(std::isfinite(cfg.scale) && cfg.scale > 0.0, ErrorCode::domain,
            "simulation: scale must be positive");
    switch (cfg.copula.family) {
        case Family::independence: break;
        case Family::gumbel:
            require(std::isfinite(cfg.copula.phi) && cfg.copula.phi >= 1.0, ErrorCode::domain,
                    "simulation: gumbel phi must be >= 1");
            break;
        default:
            fail(ErrorCode::unsupported, "simulation: only independence and gumbel are sampled");
    }
}

// Pareto pair for sample `i` of `chunk`: four uniforms from two Philox blocks.
struct PairSampler {
    Philox4x32::Key key;
    double a;  // 1/φ
    bool independent;
    double inv_alpha;
    double scale;

    void operator()(std::uint64_t chunk, std::uint32_t i, double& x, double& y) const {
        const auto chunk_lo = static_cast<std::uint32_t>(chunk);
        const auto chunk_hi = static_cast<std::uint32_t>(chunk >> 32);
        const auto b0 = Philox4x32::block({i, chunk_lo, chunk_hi, 0u}, key);
        const double e1 = -std::log(to_open_unit(b0[0], b0[1]));
        const double e2 = -std::log(to_open_unit(b0[2], b0[3]));
        // -log U for the survival-side uniforms; X = F←(1-U) = scale·expm1(-log U / α).
        double w1 = e1;
        double w2 = e2;
        if (!independent) {
            const auto b1 = Philox4x32::block({i, chunk_lo, chunk_hi, 1u}, key);
            const double theta = std::numbers::pi * to_open_unit(b1[0], b1[1]);
            const double w = -std::log(to_open_unit(b1[2], b1[3]));
            // Positive stable with Laplace transform exp(-s^a) (Kanter's representation).
            const double s = std::sin(a * theta) / std::pow(std::sin(theta), 1.0 / a) *
                             std::pow(std::sin((1.0 - a) * theta) / w, (1.0 - a) / a);
            w1 = std::pow(e1 / s, a);
            w2 = std::pow(e2 / s, a);
        }
        x = scale * std::expm1(w1 * inv_alpha);
        y = scale * std::expm1(w2 * inv_alpha);
    }
};

PairSampler make_sampler(const SimulationConfig& cfg) {
    const bool indep = cfg.copula.family == Family::independence || cfg.copula.phi == 1.0;
    return {{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32)},
            indep ? 1.0 : 1.0 / cfg.copula.phi,
            indep,
            1.0 / cfg.alpha,
            cfg.scale};
}

template <class Store>
void generate(const SimulationConfig& cfg, Store store) {
    validate(cfg);
    require(cfg.chunk <= (std::size_t{1} << 32), ErrorCode::config,
            "simulation: chunk must not exceed 2^32");
    const PairSampler sampler = make_sampler(cfg);
    const std::size_t chunks = (cfg.n + cfg.chunk - 1) / cfg.chunk;
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t begin = c * cfg.chunk;
        const std::size_t end = std::min(cfg.n, begin + cfg.chunk);
        double x = 0.0, y = 0.0;
        for (std::size_t k = begin; k < end; ++k) {
            sampler(c, static_cast<std::uint32_t>(k - begin), x, y);
            store(k, x, y);
        }
    });
}

}  // namespace

SamplePairs sample_pairs(const SimulationConfig& cfg) {
    SamplePairs p;
    p.x.resize(cfg.n);
    p.y.resize(cfg.n);
    generate(cfg, [&p](std::size_t k, double x, double y) {
        p.x[k] = x;
        p.y[k] = y;
    });
    return p;
}

std::vector<double> sample_sums(const SimulationConfig& cfg) {
    std::vector<double> z(cfg.n);
    generate(cfg, [&z](std::size_t k, double x, double y) { z[k] = x + y; });
    return z;
}

MCEstimate empirical_tailprob(std::span<const double> z, double t) {
    require(!z.empty(), ErrorCode::domain, "empirical_tailprob: no samples");
    const auto hits = std::count_if(z.begin(), z.end(), [t](double v) { return v > t; });
    MCEstimate e;
    e.n = z.size();
    e.point = static_cast<double>(hits) / static_cast<double>(e.n);
    e.std_error = std::sqrt(e.point * (1.0 - e.point) / static_cast<double>(e.n));
    e.ci_lo = e.point - 3.0 * e.std_error;
    e.ci_hi = e.point + 3.0 * e.std_error;
    return e;
}

MCEstimate empirical_tailprob(const SamplePairs& pairs, double t) {
    require(!pairs.x.empty() && pairs.x.size() == pairs.y.size(), ErrorCode::domain,
            "empirical_tailprob: no samples");
    std::vector<double> z(pairs.x.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = pairs.x[i] + pairs.y[i];
    return empirical_tailprob(z, t);
}

MCEstimate empirical_var(std::vector<double>& z, double q, double zscore) {
    require(!z.empty(), ErrorCode::domain, "empirical_var: no samples");
    require(q > 0.0 && q <= 1.0, ErrorCode::domain, "empirical_var: q must lie in (0, 1]");
    const double n = static_cast<double>(z.size());
    const double nq = n * q;
    auto k = static_cast<std::size_t>(std::floor(nq));
    // q = 0.99 and friends are not exact in binary; do not lose a whole rank to that.
    if (nq - std::floor(nq) > 1.0 - 1e-9) ++k;
    if (k < 1 || k > z.size()) fail(ErrorCode::domain, "empirical_var: floor(nq) out of range");

    const double half = zscore * std::sqrt(nq * (1.0 - q));
    const auto lo_rank = static_cast<std::size_t>(std::clamp(std::floor(nq - half), 1.0, n));
    const auto hi_rank = static_cast<std::size_t>(std::clamp(std::ceil(nq + half), 1.0, n));

    auto at = [&](std::size_t rank) { return z.begin() + static_cast<std::ptrdiff_t>(rank - 1); };
    std::nth_element(z.begin(), at(k), z.end());
    const double point = *at(k);
    double lo = point, hi = point;
    if (lo_rank < k) {
        std::nth_element(z.begin(), at(lo_rank), at(k));
        lo = *at(lo_rank);
    }
    if (hi_rank > k) {
        std::nth_element(at(k) + 1, at(hi_rank), z.end());
        hi = *at(hi_rank);
    }
    MCEstimate e;
    e.n = z.size();
    e.point = point;
    e.ci_lo = lo;
    e.ci_hi = hi;
    e.std_error = zscore > 0.0 ? (hi - lo) / (2.0 * zscore) : 0.0;
    return e;
}

void write_samples_csv(const std::string& path, const SamplePairs& pairs) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) fail(ErrorCode::io, "cannot open '" + path + "' for writing");
    std::fputs("x,y\n", f);
    for (std::size_t i = 0; i < pairs.x.size(); ++i)
        std::fprintf(f, "%.17g,%.17g\n", pairs.x[i], pairs.y[i]);
    if (std::fclose(f) != 0) fail(ErrorCode::io, "error writing '" + path + "'");
}

}  // namespace tailsum
