#include "tailsum/tailsum.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "tailsum/asymptotics.hpp"
#include "tailsum/checker.hpp"
#include "tailsum/error.hpp"
#include "tailsum/montecarlo.hpp"

using namespace tailsum;

struct ts_model {
    ParetoMarginal marginal;
    CopulaDescriptor copula;
};

struct ts_sample {
    std::vector<double> z;
    std::uint64_t seed = 0;
};

struct ts_check_report {
    AssumptionReport report;
};

namespace {

thread_local std::string g_last_error;

ts_status code_of(ErrorCode c) {
    switch (c) {
        case ErrorCode::domain: return TS_ERR_DOMAIN;
        case ErrorCode::config: return TS_ERR_CONFIG;
        case ErrorCode::boundary: return TS_ERR_BOUNDARY;
        case ErrorCode::unsupported: return TS_ERR_UNSUPPORTED;
        case ErrorCode::numeric: return TS_ERR_NUMERIC;
        case ErrorCode::io: return TS_ERR_IO;
    }
    return TS_ERR_INTERNAL;
}

template <class F>
ts_status guarded(F&& f) {
    try {
        g_last_error.clear();
        f();
        return TS_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return code_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return TS_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TS_ERR_INTERNAL;
    }
}

ts_status null_arg(const char* what) {
    g_last_error = std::string("null argument: ") + what;
    return TS_ERR_NULL;
}

void copy_str(char* dst, std::size_t cap, const std::string& src) {
    const std::size_t n = std::min(cap - 1, src.size());
    std::memcpy(dst, src.data(), n);
    dst[n] = '\0';
}

void fill(const Expansion& e, ts_expansion* out) {
    std::memset(out, 0, sizeof *out);
    out->first_order = e.first_order;
    out->value = e.value;
    copy_str(out->case_label, TS_LABEL_MAX, e.label);
    std::string diag;
    for (const auto& d : e.diagnostics) {
        if (!diag.empty()) diag += "; ";
        diag += d;
    }
    copy_str(out->diagnostics, TS_DIAG_MAX, diag);
    for (const auto& c : e.candidates) {
        if (out->n_candidates == TS_MAX_CANDIDATES) break;
        auto& slot = out->candidates[out->n_candidates++];
        copy_str(slot.name, TS_NAME_MAX, c.name);
        slot.value = c.value;
    }
}

void fill(const MCEstimate& e, std::uint64_t seed, ts_estimate* out) {
    out->point = e.point;
    out->std_error = e.std_error;
    out->ci_lo = e.ci_lo;
    out->ci_hi = e.ci_hi;
    out->n = e.n;
    out->seed = seed;
}

SimulationConfig sim_config(const ts_model* m, std::uint64_t n, std::uint64_t seed) {
    SimulationConfig cfg;
    cfg.n = static_cast<std::size_t>(n);
    cfg.seed = seed;
    cfg.copula = m->copula;
    cfg.alpha = m->marginal.alpha();
    cfg.scale = m->marginal.scale();
    return cfg;
}

const CheckResult* check_at(const ts_check_report* r, std::size_t i) {
    if (!r || i >= r->report.checks.size()) return nullptr;
    return &r->report.checks[i];
}

}  // namespace

extern "C" {

const char* ts_version(void) { return "1.0.0"; }

const char* ts_last_error(void) { return g_last_error.c_str(); }

const char* ts_status_name(ts_status status) {
    switch (status) {
        case TS_OK: return "ok";
        case TS_ERR_DOMAIN: return "domain error";
        case TS_ERR_CONFIG: return "configuration error";
        case TS_ERR_BOUNDARY: return "case boundary";
        case TS_ERR_UNSUPPORTED: return "unsupported";
        case TS_ERR_NUMERIC: return "numerical failure";
        case TS_ERR_IO: return "i/o error";
        case TS_ERR_NULL: return "null argument";
        case TS_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

ts_status ts_family_parse(const char* name, ts_family* out) {
    if (!name) return null_arg("name");
    if (!out) return null_arg("out");
    return guarded([&] {
        switch (parse_family(name)) {
            case Family::independence: *out = TS_FAMILY_INDEPENDENCE; break;
            case Family::gumbel: *out = TS_FAMILY_GUMBEL; break;
            case Family::comonotone: *out = TS_FAMILY_COMONOTONE; break;
            case Family::barnett: *out = TS_FAMILY_BARNETT; break;
            case Family::custom: fail(ErrorCode::config, "custom family has no name");
        }
    });
}

ts_status ts_model_create(double alpha, double scale, ts_family family, double param,
                          ts_model** out) {
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        CopulaDescriptor d;
        switch (family) {
            case TS_FAMILY_INDEPENDENCE: d.family = Family::independence; break;
            case TS_FAMILY_GUMBEL:
                d.family = Family::gumbel;
                d.phi = param;
                gumbel_pickands(param);  // validates φ
                break;
            case TS_FAMILY_COMONOTONE: d.family = Family::comonotone; break;
            case TS_FAMILY_BARNETT:
                d.family = Family::barnett;
                d.sigma = param;
                require(std::isfinite(param) && param > 0.0 && param <= 1.0, ErrorCode::domain,
                        "barnett: sigma must lie in (0, 1]");
                break;
            default: fail(ErrorCode::config, "unknown family code");
        }
        *out = new ts_model{ParetoMarginal(alpha, scale), d};
    });
}

void ts_model_destroy(ts_model* model) { delete model; }

ts_status ts_marginal_survival(const ts_model* model, double x, double* out) {
    if (!model) return null_arg("model");
    if (!out) return null_arg("out");
    return guarded([&] { *out = model->marginal.survival(x); });
}

ts_status ts_marginal_quantile(const ts_model* model, double q, double* out) {
    if (!model) return null_arg("model");
    if (!out) return null_arg("out");
    return guarded([&] { *out = model->marginal.quantile(q); });
}

ts_status ts_marginal_survival_quantile(const ts_model* model, double p, double* out) {
    if (!model) return null_arg("model");
    if (!out) return null_arg("out");
    return guarded([&] { *out = model->marginal.survival_quantile(p); });
}

ts_status ts_integral_I(double alpha, double beta, double* out) {
    if (!out) return null_arg("out");
    return guarded([&] { *out = integral_I(alpha, beta); });
}

ts_status ts_tailprob_expansion(const ts_model* model, double t, ts_expansion* out) {
    if (!model) return null_arg("model");
    if (!out) return null_arg("out");
    return guarded([&] {
        const auto& m = model->marginal;
        switch (model->copula.family) {
            case Family::independence: fill(tailprob_expansion_independence(m, t), out); return;
            case Family::gumbel:
                fill(tailprob_expansion_ev(m, gumbel_pickands(model->copula.phi), t), out);
                return;
            case Family::comonotone: {
                const PickandsEV p = comonotone_pickands();
                fill(tailprob_expansion_general(m, tail_order_traits(p), partial_limit_traits(p), t),
                     out);
                return;
            }
            default: break;
        }
        fail(ErrorCode::unsupported,
             "no tail expansion for family '" + to_string(model->copula.family) + "'");
    });
}

ts_status ts_var_expansion(const ts_model* model, double q, ts_boundary_policy policy,
                           ts_expansion* out) {
    if (!model) return null_arg("model");
    if (!out) return null_arg("out");
    return guarded([&] {
        const BoundaryPolicy bp =
            policy == TS_BOUNDARY_STRICT ? BoundaryPolicy::strict : BoundaryPolicy::combine;
        const auto& m = model->marginal;
        switch (model->copula.family) {
            case Family::independence: fill(var_expansion_independence(m, q, bp), out); return;
            case Family::gumbel:
                fill(var_expansion_ev(m, gumbel_pickands(model->copula.phi), q, bp), out);
                return;
            default: break;
        }
        fail(ErrorCode::unsupported,
             "no VaR expansion for family '" + to_string(model->copula.family) + "'");
    });
}

ts_status ts_simulate(const ts_model* model, uint64_t n, uint64_t seed, ts_sample** out) {
    if (!model) return null_arg("model");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        auto s = std::make_unique<ts_sample>();
        s->z = sample_sums(sim_config(model, n, seed));
        s->seed = seed;
        *out = s.release();
    });
}

void ts_sample_destroy(ts_sample* sample) { delete sample; }

ts_status ts_sample_tailprob(const ts_sample* sample, double t, ts_estimate* out) {
    if (!sample) return null_arg("sample");
    if (!out) return null_arg("out");
    return guarded([&] { fill(empirical_tailprob(sample->z, t), sample->seed, out); });
}

ts_status ts_sample_var(ts_sample* sample, double q, ts_estimate* out) {
    if (!sample) return null_arg("sample");
    if (!out) return null_arg("out");
    return guarded([&] { fill(empirical_var(sample->z, q), sample->seed, out); });
}

ts_status ts_write_pairs_csv(const ts_model* model, uint64_t n, uint64_t seed, const char* path) {
    if (!model) return null_arg("model");
    if (!path) return null_arg("path");
    return guarded([&] { write_samples_csv(path, sample_pairs(sim_config(model, n, seed))); });
}

ts_status ts_check_run(const ts_model* model, const double* log10_t, size_t n_levels,
                       double tolerance, ts_check_report** out) {
    if (!model) return null_arg("model");
    if (!out) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        CheckOptions opts;
        if (log10_t) opts.log10_t.assign(log10_t, log10_t + n_levels);
        if (tolerance > 0.0) opts.tolerance = tolerance;
        auto r = std::make_unique<ts_check_report>();
        r->report = check_assumptions(model->copula, opts);
        *out = r.release();
    });
}

void ts_check_report_destroy(ts_check_report* report) { delete report; }

size_t ts_check_count(const ts_check_report* report) {
    return report ? report->report.checks.size() : 0;
}

size_t ts_check_level_count(const ts_check_report* report) {
    return report ? report->report.log10_t.size() : 0;
}

double ts_check_level(const ts_check_report* report, size_t k) {
    if (!report || k >= report->report.log10_t.size())
        return std::numeric_limits<double>::quiet_NaN();
    return report->report.log10_t[k];
}

int ts_check_any_fail(const ts_check_report* report) {
    return report && report->report.any_fail() ? 1 : 0;
}

ts_status ts_check_info(const ts_check_report* report, size_t i, const char** name,
                        ts_verdict* verdict, double* fitted_c, double* statistic,
                        const char** note) {
    const CheckResult* c = check_at(report, i);
    if (!c) {
        g_last_error = "check index out of range";
        return TS_ERR_DOMAIN;
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (name) *name = c->name.c_str();
    if (verdict)
        *verdict = c->verdict == Verdict::pass   ? TS_VERDICT_PASS
                   : c->verdict == Verdict::fail ? TS_VERDICT_FAIL
                                                 : TS_VERDICT_INCONCLUSIVE;
    if (fitted_c) *fitted_c = c->fitted_c.value_or(nan);
    if (statistic) *statistic = c->statistic.value_or(nan);
    if (note) *note = c->note.c_str();
    return TS_OK;
}

ts_status ts_check_max_deviation(const ts_check_report* report, size_t i, size_t k, double* out) {
    const CheckResult* c = check_at(report, i);
    if (!out) return null_arg("out");
    if (!c || k >= c->max_deviation.size()) {
        g_last_error = "check index out of range";
        return TS_ERR_DOMAIN;
    }
    *out = c->max_deviation[k];
    return TS_OK;
}

size_t ts_check_sequence_count(const ts_check_report* report, size_t i) {
    const CheckResult* c = check_at(report, i);
    return c ? c->sequences.size() : 0;
}

ts_status ts_check_sequence(const ts_check_report* report, size_t i, size_t j, const char** point,
                            double* target) {
    const CheckResult* c = check_at(report, i);
    if (!c || j >= c->sequences.size()) {
        g_last_error = "sequence index out of range";
        return TS_ERR_DOMAIN;
    }
    if (point) *point = c->sequences[j].point.c_str();
    if (target) *target = c->sequences[j].target;
    return TS_OK;
}

ts_status ts_check_sequence_value(const ts_check_report* report, size_t i, size_t j, size_t k,
                                  double* value, double* deviation) {
    const CheckResult* c = check_at(report, i);
    if (!c || j >= c->sequences.size() || k >= c->sequences[j].values.size()) {
        g_last_error = "sequence index out of range";
        return TS_ERR_DOMAIN;
    }
    if (value) *value = c->sequences[j].values[k];
    if (deviation) *deviation = c->sequences[j].deviations[k];
    return TS_OK;
}

}  // extern "C"
