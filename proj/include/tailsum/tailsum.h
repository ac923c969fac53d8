/* tailsum: second-order tail asymptotics for sums of two dependent heavy-tailed risks.
 *
 * Plain C interface over the C++ core. Every call returns a ts_status; on failure
 * ts_last_error() describes what went wrong (per thread, valid until the next call
 * on that thread). Handles are opaque and must be released with their destroy call.
 */
#ifndef TAILSUM_TAILSUM_H
#define TAILSUM_TAILSUM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(TAILSUM_BUILDING)
#    define TS_API __declspec(dllexport)
#  else
#    define TS_API __declspec(dllimport)
#  endif
#else
#  define TS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ts_status {
    TS_OK = 0,
    TS_ERR_DOMAIN = 1,
    TS_ERR_CONFIG = 2,
    TS_ERR_BOUNDARY = 3,
    TS_ERR_UNSUPPORTED = 4,
    TS_ERR_NUMERIC = 5,
    TS_ERR_IO = 6,
    TS_ERR_NULL = 7,
    TS_ERR_INTERNAL = 8
} ts_status;

typedef enum ts_family {
    TS_FAMILY_INDEPENDENCE = 0,
    TS_FAMILY_GUMBEL = 1,
    TS_FAMILY_COMONOTONE = 2,
    TS_FAMILY_BARNETT = 3 /* checker-only negative example */
} ts_family;

typedef enum ts_boundary_policy {
    TS_BOUNDARY_COMBINE = 0, /* sum the competing second-order terms */
    TS_BOUNDARY_STRICT = 1   /* fail with TS_ERR_BOUNDARY */
} ts_boundary_policy;

typedef enum ts_verdict {
    TS_VERDICT_PASS = 0,
    TS_VERDICT_FAIL = 1,
    TS_VERDICT_INCONCLUSIVE = 2
} ts_verdict;

typedef struct ts_model ts_model;
typedef struct ts_sample ts_sample;
typedef struct ts_check_report ts_check_report;

#define TS_LABEL_MAX 64
#define TS_DIAG_MAX 512
#define TS_NAME_MAX 32
#define TS_MAX_CANDIDATES 4

typedef struct ts_candidate {
    char name[TS_NAME_MAX];
    double value;
} ts_candidate;

typedef struct ts_expansion {
    double first_order; /* 2F̄(t), or 2^{1/α} VaR_q(X) */
    double value;       /* full second-order expansion */
    char case_label[TS_LABEL_MAX];
    char diagnostics[TS_DIAG_MAX]; /* "; "-separated, empty when none */
    int n_candidates;
    ts_candidate candidates[TS_MAX_CANDIDATES];
} ts_expansion;

typedef struct ts_estimate {
    double point;
    double std_error;
    double ci_lo;
    double ci_hi;
    uint64_t n;
    uint64_t seed;
} ts_estimate;

TS_API const char* ts_version(void);
TS_API const char* ts_last_error(void);
TS_API const char* ts_status_name(ts_status status);

TS_API ts_status ts_family_parse(const char* name, ts_family* out);

/* Pareto(alpha, scale) marginals joined by a survival copula. `param` is φ for
 * gumbel, σ for barnett, ignored otherwise. */
TS_API ts_status ts_model_create(double alpha, double scale, ts_family family, double param,
                                 ts_model** out);
TS_API void ts_model_destroy(ts_model* model);

TS_API ts_status ts_marginal_survival(const ts_model* model, double x, double* out);
TS_API ts_status ts_marginal_quantile(const ts_model* model, double q, double* out);
/* F←(1 - p) without rounding 1 - p. */
TS_API ts_status ts_marginal_survival_quantile(const ts_model* model, double p, double* out);

TS_API ts_status ts_integral_I(double alpha, double beta, double* out);

/* Pr(X + Y > t); t must exceed the marginal median. */
TS_API ts_status ts_tailprob_expansion(const ts_model* model, double t, ts_expansion* out);
/* VaR_q(X + Y) for 0.5 < q < 1. */
TS_API ts_status ts_var_expansion(const ts_model* model, double q, ts_boundary_policy policy,
                                  ts_expansion* out);

/* Monte Carlo: n sums X + Y drawn from the model; deterministic in (model, n, seed). */
TS_API ts_status ts_simulate(const ts_model* model, uint64_t n, uint64_t seed, ts_sample** out);
TS_API void ts_sample_destroy(ts_sample* sample);
TS_API ts_status ts_sample_tailprob(const ts_sample* sample, double t, ts_estimate* out);
/* Order statistic Z_{⌊nq⌋,n} with a distribution-free CI at z = 3. Reorders the sample. */
TS_API ts_status ts_sample_var(ts_sample* sample, double q, ts_estimate* out);
/* Writes the (x, y) pairs of the same stream as CSV. */
TS_API ts_status ts_write_pairs_csv(const ts_model* model, uint64_t n, uint64_t seed,
                                    const char* path);

/* Assumption checker with default grids; log10_t may be NULL for the default levels. */
TS_API ts_status ts_check_run(const ts_model* model, const double* log10_t, size_t n_levels,
                              double tolerance, ts_check_report** out);
TS_API void ts_check_report_destroy(ts_check_report* report);
TS_API size_t ts_check_count(const ts_check_report* report);
TS_API size_t ts_check_level_count(const ts_check_report* report);
TS_API double ts_check_level(const ts_check_report* report, size_t k);
TS_API int ts_check_any_fail(const ts_check_report* report);
/* fitted_c and statistic are NaN when the check has none. */
TS_API ts_status ts_check_info(const ts_check_report* report, size_t i, const char** name,
                               ts_verdict* verdict, double* fitted_c, double* statistic,
                               const char** note);
TS_API ts_status ts_check_max_deviation(const ts_check_report* report, size_t i, size_t k,
                                        double* out);
TS_API size_t ts_check_sequence_count(const ts_check_report* report, size_t i);
TS_API ts_status ts_check_sequence(const ts_check_report* report, size_t i, size_t j,
                                   const char** point, double* target);
TS_API ts_status ts_check_sequence_value(const ts_check_report* report, size_t i, size_t j,
                                         size_t k, double* value, double* deviation);

#ifdef __cplusplus
}
#endif

#endif /* TAILSUM_TAILSUM_H */
