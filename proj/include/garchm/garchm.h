/*
 * garchm - GARCH M-estimation with heavy-tail-robust scores, weighted
 * bootstrap inference, and Monte Carlo study runners.
 *
 * C89-compatible surface over the C++ core: opaque handles, integer status
 * codes, explicit free functions. All functions returning gm_status leave a
 * thread-local message retrievable via gm_last_error() on failure.
 */
#ifndef GARCHM_H
#define GARCHM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GM_API __declspec(dllexport)
#else
#define GM_API __attribute__((visibility("default")))
#endif

typedef enum gm_status {
    GM_OK = 0,
    GM_ERR_INVALID_ARGUMENT = 1,
    GM_ERR_PARSE = 2,
    GM_ERR_DATA = 3,
    GM_ERR_NO_ROOT = 4,
    GM_ERR_NON_STATIONARY = 5,
    GM_ERR_SINGULAR = 6,
    GM_ERR_NOT_CONVERGED = 7,
    GM_ERR_TOO_FEW_REPLICATES = 8,
    GM_ERR_INTERNAL = 9
} gm_status;

typedef enum gm_score_kind {
    GM_SCORE_QMLE = 0,
    GM_SCORE_LAD = 1,
    GM_SCORE_HUBER = 2,
    GM_SCORE_MU = 3,
    GM_SCORE_CAUCHY = 4
} gm_score_kind;

typedef enum gm_dist_kind {
    GM_DIST_NORMAL = 0,
    GM_DIST_DOUBLE_EXPONENTIAL = 1,
    GM_DIST_LOGISTIC = 2,
    GM_DIST_STUDENT_T = 3
} gm_dist_kind;

typedef enum gm_weight_scheme {
    GM_SCHEME_M = 0,
    GM_SCHEME_E = 1,
    GM_SCHEME_U = 2
} gm_weight_scheme;

/* tuning: k for Huber, mu for the mu-score; ignored otherwise */
typedef struct gm_score {
    gm_score_kind kind;
    double tuning;
} gm_score;

/* df used for Student-t only; standardized rescales draws to unit variance */
typedef struct gm_dist {
    gm_dist_kind kind;
    double df;
    int standardized;
} gm_dist;

typedef struct gm_series gm_series;
typedef struct gm_fit gm_fit;
typedef struct gm_boot gm_boot;

GM_API const char* gm_version(void);
GM_API const char* gm_last_error(void); /* thread-local, never NULL */
GM_API void gm_string_free(char* s);

/* ---- series ------------------------------------------------------------ */

GM_API gm_status gm_series_create(const double* values, size_t n, gm_series** out);
GM_API void gm_series_free(gm_series* series);
GM_API size_t gm_series_size(const gm_series* series);
GM_API const double* gm_series_values(const gm_series* series);

/* theta layout everywhere: omega, alpha_1..alpha_p, beta_1..beta_q */
GM_API gm_status gm_simulate(int p, int q, const double* theta, const gm_dist* dist,
                             size_t n, size_t burn_in, uint64_t seed, gm_series** out);

/* v_out: length n. grad_out: NULL or length n*(1+p+q), row-major. */
GM_API gm_status gm_variance_filter(int p, int q, const double* theta,
                                    const gm_series* series, double* v_out,
                                    double* grad_out);

/* ---- score functions ----------------------------------------------------*/

GM_API gm_status gm_score_h(const gm_score* score, double x, double* out);
GM_API gm_status gm_score_h_dot(const gm_score* score, double x, double* out);

/* samples == 0 selects deterministic quadrature; otherwise Monte Carlo with
 * `samples` draws (at least 1e5) reproducible for a given seed. */
GM_API gm_status gm_solve_ch(const gm_score* score, const gm_dist* dist, size_t samples,
                             uint64_t seed, double* out);
GM_API gm_status gm_alpha_dot(const gm_score* score, const gm_dist* proxy, size_t samples,
                              uint64_t seed, double* out);

/* ---- fitting ------------------------------------------------------------*/

typedef struct gm_fit_options {
    int max_iter;        /* default 200 */
    double rel_tol;      /* default 1e-8 */
    double alpha_dot;    /* <= 0: standard-normal proxy value */
    double alpha_floor;  /* lower box bound for alpha coordinates */
    const double* initial; /* NULL: data-driven default start */
} gm_fit_options;

GM_API void gm_fit_options_init(gm_fit_options* options);

GM_API gm_status gm_fit_run(const gm_series* series, int p, int q, const gm_score* score,
                            const gm_fit_options* options, gm_fit** out);
GM_API void gm_fit_free(gm_fit* fit);

GM_API int gm_fit_dim(const gm_fit* fit);
GM_API gm_status gm_fit_theta(const gm_fit* fit, double* out);
GM_API int gm_fit_converged(const gm_fit* fit);
GM_API int gm_fit_iterations(const gm_fit* fit);
GM_API double gm_fit_m_norm(const gm_fit* fit);
GM_API size_t gm_fit_residual_count(const gm_fit* fit);
GM_API gm_status gm_fit_residuals(const gm_fit* fit, double* out);
GM_API size_t gm_fit_trace_length(const gm_fit* fit);
GM_API gm_status gm_fit_trace(const gm_fit* fit, double* out); /* length*dim row-major */

/* ---- weighted bootstrap --------------------------------------------------*/

typedef struct gm_boot_options {
    int max_iter; /* default 50 (warm start at the fit) */
    int cache;    /* reuse per-observation summands across replicates */
    int threads;  /* default 1 */
} gm_boot_options;

GM_API void gm_boot_options_init(gm_boot_options* options);

GM_API gm_status gm_generate_weights(gm_weight_scheme scheme, size_t n, uint64_t seed,
                                     double* out);

GM_API gm_status gm_bootstrap_run(const gm_series* series, const gm_fit* fit,
                                  gm_weight_scheme scheme, int B, uint64_t seed,
                                  const gm_boot_options* options, gm_boot** out);
GM_API void gm_boot_free(gm_boot* boot);

GM_API int gm_boot_replicate_count(const gm_boot* boot);
GM_API int gm_boot_dim(const gm_boot* boot);
GM_API gm_status gm_boot_replicates(const gm_boot* boot, double* out); /* B*dim */
GM_API gm_status gm_boot_converged_flags(const gm_boot* boot, int* out);
GM_API int gm_boot_converged_count(const gm_boot* boot);
GM_API int gm_boot_excessive_failures(const gm_boot* boot);
GM_API double gm_boot_sigma_n(const gm_boot* boot);

GM_API gm_status gm_bootstrap_ci(const gm_boot* boot, double level, double* lo, double* hi);
GM_API gm_status gm_bootstrap_bias_mse(const gm_boot* boot, double* bias, double* mse);

/* ---- asymptotic-normal inference -----------------------------------------*/

/* cov: dim*dim row-major; sigma2_h may be NULL */
GM_API gm_status gm_covariance(const gm_series* series, const gm_fit* fit, double* cov,
                               double* sigma2_h);
GM_API gm_status gm_normal_ci(const gm_fit* fit, const double* cov, double level,
                              double* lo, double* hi);

/* ---- diagnostics ----------------------------------------------------------*/

GM_API gm_status gm_normalized_volatility(const gm_series* series, const gm_fit* fit,
                                          double* u_out);
/* sorted_out/ref_out: length n; tail_slope_out may be NULL */
GM_API gm_status gm_qq_against_t(const double* residuals, size_t n, double d,
                                 double* sorted_out, double* ref_out,
                                 double* tail_slope_out);
GM_API gm_status gm_t_quantile(double prob, double d, double* out);

/* ---- experiment runners ----------------------------------------------------
 * JSON spec in, JSON report out. The returned string is heap-allocated and
 * must be released with gm_string_free. Spec keys: order{p,q}, theta0{omega,
 * alpha[],beta[]}, dist{kind,df,standardized}, n, burn_in, estimators[],
 * R, B, schemes[], fit_order, seed, threads (and `level` for coverage).
 */
GM_API gm_status gm_run_bias_mse(const char* spec_json, char** report_json);
GM_API gm_status gm_run_coverage(const char* spec_json, double level, char** report_json);
GM_API gm_status gm_run_misspec(const char* spec_json, char** report_json);
/* rows_json: array of dist objects; scores_json: array of score objects */
GM_API gm_status gm_run_ch_table(const char* rows_json, const char* scores_json,
                                 size_t samples, uint64_t seed, char** report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GARCHM_H */
