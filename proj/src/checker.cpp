#include "tailsum/checker.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

#include "tailsum/error.hpp"
#include "tailsum/parallel.hpp"

namespace tailsum {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Log-domain evaluation at t = 1e-10000 carries ~1e-12 rounding; deviations this
// small never count against monotonicity.
constexpr double kNoiseFloor = 1e-9;

struct PointSpec {
    std::string label;
    double target = 0.0;
    std::function<double(double)> value;  // argument: log t
};

using DeviationFn = std::function<double(double value, double target)>;

double relative_deviation(double value, double target) {
    if (!std::isfinite(value)) return kInf;
    return std::abs(value - target) / std::max(std::abs(target), 1.0);
}

std::string label2(const char* a, double x, const char* b, double y) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s=%g,%s=%g", a, x, b, y);
    return buf;
}

Verdict verdict_from(const std::vector<double>& dev, double tol) {
    const std::size_t n = dev.size();
    if (n < 3) return Verdict::inconclusive;
    if (!(dev[n - 1] < tol)) return Verdict::fail;
    for (std::size_t i = n - 2; i < n; ++i)
        if (dev[i] > dev[i - 1] + kNoiseFloor) return Verdict::fail;
    return Verdict::pass;
}

std::vector<double> log_levels(const CheckOptions& opts) {
    std::vector<double> lt;
    lt.reserve(opts.log10_t.size());
    for (double l : opts.log10_t) lt.push_back(l * std::log(10.0));
    return lt;
}

CheckResult run_sequences(const std::string& name, const std::vector<PointSpec>& points,
                          const std::vector<double>& lts, const DeviationFn& deviation) {
    CheckResult r;
    r.name = name;
    r.sequences.resize(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        CheckSequence seq;
        seq.point = points[i].label;
        seq.target = points[i].target;
        for (double lt : lts) {
            const double v = points[i].value(lt);
            seq.values.push_back(v);
            seq.deviations.push_back(deviation(v, seq.target));
        }
        r.sequences[i] = std::move(seq);
    });
    r.max_deviation.assign(lts.size(), 0.0);
    for (const auto& s : r.sequences)
        for (std::size_t k = 0; k < lts.size(); ++k)
            r.max_deviation[k] = std::max(r.max_deviation[k], s.deviations[k]);
    return r;
}

void validate(const CheckOptions& opts) {
    const auto& l = opts.log10_t;
    if (l.size() < 3) fail(ErrorCode::config, "checker: need at least three t levels");
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (!std::isfinite(l[i]) || l[i] >= 0.0)
            fail(ErrorCode::config, "checker: t levels must lie in (0, 1)");
        if (i > 0 && !(l[i] < l[i - 1]))
            fail(ErrorCode::config, "checker: t sequence must be strictly decreasing");
    }
    if (!(opts.tolerance > 0.0)) fail(ErrorCode::config, "checker: tolerance must be positive");
    auto positive = [](const std::vector<double>& g, const char* what) {
        if (g.empty()) fail(ErrorCode::config, std::string("checker: empty grid ") + what);
        for (double x : g)
            if (!(x > 0.0 && std::isfinite(x)))
                fail(ErrorCode::config, std::string("checker: grid ") + what + " must be positive");
    };
    positive(opts.grid.uv, "uv");
    positive(opts.grid.v_fixed, "v_fixed");
    positive(opts.grid.u_perturb, "u_perturb");
    for (double v : opts.grid.v_fixed)
        if (v >= 1.0) fail(ErrorCode::config, "checker: v_fixed values must lie in (0, 1)");
    const double umax = *std::max_element(opts.grid.uv.begin(), opts.grid.uv.end());
    if (std::log10(umax * (1.0 + opts.grid.u_perturb.back())) + l.front() > 0.0)
        fail(ErrorCode::config, "checker: largest grid point times t exceeds 1");
}

CheckResult check_a3(const SurvivalCopula& sc, const CheckOptions& opts,
                     const std::vector<double>& lts) {
    std::vector<PointSpec> points;
    for (double u : opts.grid.u_perturb) {
        for (double v : opts.grid.v_fixed) {
            const double lu = std::log1p(u);
            const double lv = std::log(v);
            points.push_back({label2("u", u, "v", v), 0.0, [&sc, lu, lv](double lt) {
                                  return sc.log_partial_v(lu + lt, lv) - sc.log_partial_v(lt, lv);
                              }});
        }
    }
    // values hold log(Ĉ_v(t(1+u),v)/Ĉ_v(t,v)); compare with c·log(1+u) for a fitted c.
    CheckResult r = run_sequences("A3", points, lts, [](double, double) { return 0.0; });
    double num = 0.0, den = 0.0, sup = 0.0;
    std::size_t k = 0;
    for (double u : opts.grid.u_perturb) {
        for (std::size_t j = 0; j < opts.grid.v_fixed.size(); ++j, ++k) {
            const auto& s = r.sequences[k];
            const double a = std::log1p(u);
            num += a * s.values.back();
            den += a * a;
            for (double b : s.values) sup = std::max(sup, std::abs(std::expm1(b)) / u);
        }
    }
    const double c = num / den;
    r.fitted_c = c;
    r.statistic = sup;
    k = 0;
    std::fill(r.max_deviation.begin(), r.max_deviation.end(), 0.0);
    for (double u : opts.grid.u_perturb) {
        for (std::size_t j = 0; j < opts.grid.v_fixed.size(); ++j, ++k) {
            auto& s = r.sequences[k];
            s.target = c * std::log1p(u);
            for (std::size_t i = 0; i < s.values.size(); ++i) {
                s.deviations[i] = relative_deviation(s.values[i], s.target);
                r.max_deviation[i] = std::max(r.max_deviation[i], s.deviations[i]);
            }
        }
    }
    r.verdict = std::isfinite(c) && std::isfinite(sup) ? verdict_from(r.max_deviation, opts.tolerance)
                                                       : Verdict::fail;
    r.note = "values are log(Chat_v(t(1+u),v)/Chat_v(t,v)); target c*log(1+u), c fitted at the last level; statistic = sup |ratio-1|/u";
    return r;
}

CheckResult check_a4(const SurvivalCopula& sc, const PartialLimitTraits& plt,
                     const CheckOptions& opts, const std::vector<double>& lts) {
    std::vector<PointSpec> points;
    for (double u : opts.grid.uv) {
        for (double v : opts.grid.v_fixed) {
            const double lu = std::log(u);
            const double lv = std::log(v);
            points.push_back({label2("u", u, "v", v), plt.varphi(u, v),
                              [&sc, &plt, lu, lv](double lt) {
                                  const double h = plt.h ? plt.h(std::exp(lt)) : 1.0;
                                  return std::exp(sc.log_partial_v(lu + lt, lv) -
                                                  plt.theta_exp * lt) / h;
                              }});
        }
    }
    CheckResult r = run_sequences("A4", points, lts, relative_deviation);
    r.verdict = verdict_from(r.max_deviation, opts.tolerance);
    if (plt.degenerate) r.note = "varphi is identically zero (degenerate partial limit)";
    return r;
}

CheckResult check_evcond(const PickandsEV& p, const CheckOptions& opts,
                         const std::vector<double>& lts) {
    BivariateFn log_a2 = p.log_a2 ? p.log_a2 : BivariateFn([&p](double x, double y) {
        const double a = p.a2(x, y);
        return a > 0.0 ? std::log(a) : -kInf;
    });
    std::vector<PointSpec> points;
    for (double x : opts.grid.uv) {
        for (double u : opts.grid.u_perturb) {
            points.push_back({label2("x", x, "u", u), 1.0, [log_a2, x, u](double lt) {
                                  const double eps = std::log1p(u) / lt;
                                  return std::exp(log_a2(1.0, x / (1.0 + eps)) - log_a2(1.0, x));
                              }});
        }
    }
    CheckResult r = run_sequences("evcond", points, lts, relative_deviation);
    // Smallest c with ratio <= (1+u)^c at every observed level.
    double c = 0.0;
    std::size_t k = 0;
    for (std::size_t ix = 0; ix < opts.grid.uv.size(); ++ix) {
        for (double u : opts.grid.u_perturb) {
            for (double val : r.sequences[k].values) c = std::max(c, std::log(val) / std::log1p(u));
            ++k;
        }
    }
    r.fitted_c = c;
    r.verdict = std::isfinite(c) ? verdict_from(r.max_deviation, opts.tolerance) : Verdict::fail;
    r.note = "values are A2(1, x/(1+log(1+u)/log t)) / A2(1,x); fitted_c is the smallest c bounding them by (1+u)^c";
    return r;
}

CheckResult check_taylor(const SurvivalCopula& sc, const CheckOptions& opts,
                         const std::vector<double>& lts) {
    constexpr double h = 1e-4;
    std::vector<PointSpec> points;
    bool unstable = false;
    for (double v : opts.grid.v_fixed) {
        const double lv = std::log(v);
        // One-sided difference of Ĉ_v in u at 0 (Ĉ_v(0,v) = 0), one Richardson level.
        const double coarse = std::exp(sc.log_partial_v(std::log(h), lv)) / h;
        const double fine = std::exp(sc.log_partial_v(std::log(h / 2.0), lv)) / (h / 2.0);
        const double slope = 2.0 * fine - coarse;
        if (!std::isfinite(slope) ||
            std::abs(slope - fine) > opts.tolerance * std::max(std::abs(slope), 1.0))
            unstable = true;
        for (double u : opts.grid.uv) {
            const double lu = std::log(u);
            points.push_back({label2("u", u, "v", v), u * slope, [&sc, lu, lv](double lt) {
                                  return std::exp(sc.log_partial_v(lu + lt, lv) - lt);
                              }});
        }
    }
    CheckResult r = run_sequences("taylor", points, lts, relative_deviation);
    r.verdict = unstable ? Verdict::inconclusive : verdict_from(r.max_deviation, opts.tolerance);
    r.note = unstable ? "finite-difference slope unstable under Richardson extrapolation"
                      : "values are Chat_v(ut,v)/t; target u*Chat_vu(0,v) by one-sided difference";
    return r;
}

CheckResult check_dct(const SurvivalCopula& sc, const PickandsEV& p, const CheckOptions& opts,
                      const std::vector<double>& lts) {
    const double c = p.a2_10();
    std::vector<PointSpec> points;
    for (double v : opts.grid.v_fixed) {
        const double lv = std::log(v);
        const double envelope = std::pow(v, c - 1.0);
        points.push_back({label2("v", v, "env", envelope), 1.0, [&sc, lv, envelope](double lt) {
                              return std::exp(sc.log_partial_v(lt, lv) - lt) / envelope;
                          }});
    }
    CheckResult r = run_sequences("dct_envelope", points, lts, [](double value, double) {
        return std::isfinite(value) ? std::max(0.0, value - 1.0) : kInf;
    });
    double sup = 0.0;
    for (double d : r.max_deviation) sup = std::max(sup, d);
    r.statistic = sup;
    r.verdict = sup <= 1e-9 ? Verdict::pass : Verdict::fail;
    r.note = "values are (Chat_v(t,v)/t) / v^(A2(1,0)-1); must not exceed 1";
    return r;
}

CheckResult check_symmetry(const SurvivalCopula& sc, const CheckOptions& opts,
                           const std::vector<double>& lts) {
    std::vector<PointSpec> points;
    const auto& g = opts.grid.uv;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = i + 1; j < g.size(); ++j) {
            const double lu = std::log(g[i]);
            const double lv = std::log(g[j]);
            points.push_back({label2("u", g[i], "v", g[j]), 0.0, [&sc, lu, lv](double lt) {
                                  const double a = sc.log_value(lu + lt, lv + lt);
                                  const double b = sc.log_value(lv + lt, lu + lt);
                                  return (a - b) / std::max(std::abs(a), 1.0);
                              }});
        }
    }
    CheckResult r = run_sequences("symmetry", points, lts, relative_deviation);
    r.verdict = verdict_from(r.max_deviation, opts.tolerance);
    return r;
}

std::string kappa_label(double kappa) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "A2[kappa=%.1f]", kappa);
    return buf;
}

}  // namespace

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

bool AssumptionReport::any_fail() const {
    return std::any_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.verdict == Verdict::fail; });
}

bool AssumptionReport::any_inconclusive() const {
    return std::any_of(checks.begin(), checks.end(),
                       [](const CheckResult& c) { return c.verdict == Verdict::inconclusive; });
}

const CheckResult* AssumptionReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

CheckResult check_tail_order(const SurvivalCopula& sc, double kappa, const UnivariateFn& ell,
                             const BivariateFn& tau, const CheckOptions& opts) {
    validate(opts);
    const auto lts = log_levels(opts);
    std::vector<PointSpec> points;
    for (double u : opts.grid.uv) {
        for (double v : opts.grid.uv) {
            const double lu = std::log(u);
            const double lv = std::log(v);
            auto log_ratio = [&sc, &ell, kappa, lu, lv](double lt) {
                const double l = ell ? std::log(ell(std::exp(lt))) : 0.0;
                return sc.log_value(lu + lt, lv + lt) - kappa * lt - l;
            };
            if (tau)
                points.push_back({label2("u", u, "v", v), tau(u, v),
                                  [log_ratio](double lt) { return std::exp(log_ratio(lt)); }});
            else
                points.push_back({label2("u", u, "v", v), 0.0, log_ratio});
        }
    }
    if (tau) {
        CheckResult r = run_sequences("A2", points, lts, relative_deviation);
        r.verdict = verdict_from(r.max_deviation, opts.tolerance);
        r.note = "values are Chat(ut,vt)/(t^kappa l(t)); target tau(u,v)";
        return r;
    }
    // No τ: the log-ratio must settle to a finite value.
    CheckResult r = run_sequences(kappa_label(kappa), points, lts, [](double, double) { return 0.0; });
    std::fill(r.max_deviation.begin(), r.max_deviation.end(), 0.0);
    r.max_deviation[0] = kInf;
    for (auto& s : r.sequences) {
        s.deviations[0] = kInf;
        for (std::size_t i = 1; i < s.values.size(); ++i) {
            const double d = std::abs(s.values[i] - s.values[i - 1]);
            s.deviations[i] = std::isfinite(d) ? d : kInf;
            r.max_deviation[i] = std::max(r.max_deviation[i], s.deviations[i]);
        }
        s.target = s.values.back();
    }
    r.verdict = verdict_from(r.max_deviation, opts.tolerance);
    r.note = "values are log(Chat(ut,vt)/t^kappa); deviation is the change from the previous level";
    return r;
}

AssumptionReport check_assumptions(const SurvivalCopula& sc, const TailOrderTraits& tot,
                                   const PartialLimitTraits& plt, const PickandsEV* pickands,
                                   const CheckOptions& opts) {
    validate(opts);
    const auto lts = log_levels(opts);
    AssumptionReport rep;
    rep.log10_t = opts.log10_t;
    rep.grid = opts.grid;
    rep.tolerance = opts.tolerance;
    rep.checks.push_back(check_tail_order(sc, tot.kappa, tot.ell, tot.tau, opts));
    rep.checks.push_back(check_a3(sc, opts, lts));
    rep.checks.push_back(check_a4(sc, plt, opts, lts));
    if (pickands) rep.checks.push_back(check_evcond(*pickands, opts, lts));
    rep.checks.push_back(check_taylor(sc, opts, lts));
    if (pickands) rep.checks.push_back(check_dct(sc, *pickands, opts, lts));
    rep.checks.push_back(check_symmetry(sc, opts, lts));
    return rep;
}

AssumptionReport check_assumptions(const CopulaDescriptor& d, const CheckOptions& opts) {
    const SurvivalCopula sc = survival_copula(d);
    if (d.family != Family::barnett) {
        const PickandsEV p = pickands_for(d);
        return check_assumptions(sc, tail_order_traits(p), partial_limit_traits(p), &p, opts);
    }
    validate(opts);
    const auto lts = log_levels(opts);
    AssumptionReport rep;
    rep.log10_t = opts.log10_t;
    rep.grid = opts.grid;
    rep.tolerance = opts.tolerance;
    for (double kappa : opts.trial_kappas) rep.checks.push_back(check_tail_order(sc, kappa, {}, {}, opts));
    rep.checks.push_back(check_a3(sc, opts, lts));
    rep.checks.push_back(check_taylor(sc, opts, lts));
    rep.checks.push_back(check_symmetry(sc, opts, lts));
    return rep;
}

}  // namespace tailsum
