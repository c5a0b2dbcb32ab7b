#include "garchm/garchm.h"

#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "core/diagnostics.hpp"
#include "core/errors.hpp"
#include "core/report.hpp"
#include "core/special.hpp"

using namespace garchm;

namespace {

thread_local std::string g_last_error;

gm_status status_from(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return GM_ERR_INVALID_ARGUMENT;
        case ErrorCode::parse: return GM_ERR_PARSE;
        case ErrorCode::data: return GM_ERR_DATA;
        case ErrorCode::no_root: return GM_ERR_NO_ROOT;
        case ErrorCode::non_stationary: return GM_ERR_NON_STATIONARY;
        case ErrorCode::singular_matrix: return GM_ERR_SINGULAR;
        case ErrorCode::not_converged: return GM_ERR_NOT_CONVERGED;
        case ErrorCode::too_few_replicates: return GM_ERR_TOO_FEW_REPLICATES;
        case ErrorCode::internal: return GM_ERR_INTERNAL;
    }
    return GM_ERR_INTERNAL;
}

template <typename Fn>
gm_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return GM_OK;
    } catch (const GarchError& e) {
        g_last_error = e.what();
        return status_from(e.code());
    } catch (const nlohmann::json::exception& e) {
        g_last_error = e.what();
        return GM_ERR_PARSE;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return GM_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GM_ERR_INTERNAL;
    }
}

ScoreFunction to_score(const gm_score* s) {
    if (s == nullptr) throw InvalidArgumentError("score is NULL");
    switch (s->kind) {
        case GM_SCORE_QMLE: return ScoreFunction::qmle();
        case GM_SCORE_LAD: return ScoreFunction::lad();
        case GM_SCORE_HUBER: return ScoreFunction::huber(s->tuning);
        case GM_SCORE_MU: return ScoreFunction::mu(s->tuning);
        case GM_SCORE_CAUCHY: return ScoreFunction::cauchy();
    }
    throw InvalidArgumentError("unknown score kind");
}

ErrorDistribution to_dist(const gm_dist* d) {
    if (d == nullptr) throw InvalidArgumentError("distribution is NULL");
    ErrorDistribution out;
    switch (d->kind) {
        case GM_DIST_NORMAL: out = ErrorDistribution::normal(); break;
        case GM_DIST_DOUBLE_EXPONENTIAL:
            out = ErrorDistribution::double_exponential();
            break;
        case GM_DIST_LOGISTIC: out = ErrorDistribution::logistic(); break;
        case GM_DIST_STUDENT_T: out = ErrorDistribution::student_t(d->df); break;
        default: throw InvalidArgumentError("unknown distribution kind");
    }
    out.standardized = d->standardized != 0;
    out.validate();
    return out;
}

ParameterVector to_theta(int p, int q, const double* theta) {
    if (theta == nullptr) throw InvalidArgumentError("theta is NULL");
    GarchOrder order{p, q};
    order.validate();
    Eigen::VectorXd v(order.dim());
    for (int i = 0; i < order.dim(); ++i) v[i] = theta[i];
    return ParameterVector::from_vector(order, v);
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

WeightScheme to_scheme(gm_weight_scheme s) {
    switch (s) {
        case GM_SCHEME_M: return WeightScheme::M;
        case GM_SCHEME_E: return WeightScheme::E;
        case GM_SCHEME_U: return WeightScheme::U;
    }
    throw InvalidArgumentError("unknown weight scheme");
}

template <typename T>
const T& deref(const T* p, const char* what) {
    if (p == nullptr) throw InvalidArgumentError(std::string(what) + " is NULL");
    return *p;
}

}  // namespace

struct gm_series {
    SeriesData data;
};

struct gm_fit {
    FitResult result;
    ScoreFunction score;
    FitConfig config;
};

struct gm_boot {
    BootstrapRun run;
};

extern "C" {

const char* gm_version(void) { return "1.0.0"; }

const char* gm_last_error(void) { return g_last_error.c_str(); }

void gm_string_free(char* s) { delete[] s; }

gm_status gm_series_create(const double* values, size_t n, gm_series** out) {
    return guarded([&] {
        if (values == nullptr || out == nullptr) {
            throw InvalidArgumentError("gm_series_create: NULL argument");
        }
        auto series = std::make_unique<gm_series>();
        series->data.x.assign(values, values + n);
        series->data.validate();
        *out = series.release();
    });
}

void gm_series_free(gm_series* series) { delete series; }

size_t gm_series_size(const gm_series* series) {
    return series == nullptr ? 0 : series->data.n();
}

const double* gm_series_values(const gm_series* series) {
    return series == nullptr ? nullptr : series->data.x.data();
}

gm_status gm_simulate(int p, int q, const double* theta, const gm_dist* dist, size_t n,
                      size_t burn_in, uint64_t seed, gm_series** out) {
    return guarded([&] {
        if (out == nullptr) throw InvalidArgumentError("gm_simulate: out is NULL");
        auto series = std::make_unique<gm_series>();
        series->data = simulate_path(to_theta(p, q, theta), to_dist(dist), n, burn_in, seed);
        *out = series.release();
    });
}

gm_status gm_variance_filter(int p, int q, const double* theta, const gm_series* series,
                             double* v_out, double* grad_out) {
    return guarded([&] {
        const auto& s = deref(series, "series");
        if (v_out == nullptr) throw InvalidArgumentError("v_out is NULL");
        const ParameterVector pv = to_theta(p, q, theta);
        const VarianceFilterOutput f = variance_filter(pv, s.data);
        std::memcpy(v_out, f.v.data(), f.v.size() * sizeof(double));
        if (grad_out != nullptr) {
            const int k = pv.order.dim();
            for (Eigen::Index t = 0; t < f.grad.rows(); ++t) {
                for (int j = 0; j < k; ++j) grad_out[t * k + j] = f.grad(t, j);
            }
        }
    });
}

gm_status gm_score_h(const gm_score* score, double x, double* out) {
    return guarded([&] {
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        *out = to_score(score).h(x);
    });
}

gm_status gm_score_h_dot(const gm_score* score, double x, double* out) {
    return guarded([&] {
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        *out = to_score(score).h_dot(x);
    });
}

gm_status gm_solve_ch(const gm_score* score, const gm_dist* dist, size_t samples,
                      uint64_t seed, double* out) {
    return guarded([&] {
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        *out = samples == 0 ? solve_ch_quadrature(to_score(score), to_dist(dist))
                            : solve_ch_mc(to_score(score), to_dist(dist), samples, seed);
    });
}

gm_status gm_alpha_dot(const gm_score* score, const gm_dist* proxy, size_t samples,
                       uint64_t seed, double* out) {
    return guarded([&] {
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        *out = samples == 0 ? alpha_dot_quadrature(to_score(score), to_dist(proxy))
                            : alpha_dot_mc(to_score(score), to_dist(proxy), samples, seed);
    });
}

void gm_fit_options_init(gm_fit_options* options) {
    if (options == nullptr) return;
    const FitConfig defaults;
    options->max_iter = defaults.max_iter;
    options->rel_tol = defaults.rel_tol;
    options->alpha_dot = 0.0;
    options->alpha_floor = defaults.alpha_floor;
    options->initial = nullptr;
}

gm_status gm_fit_run(const gm_series* series, int p, int q, const gm_score* score,
                     const gm_fit_options* options, gm_fit** out) {
    return guarded([&] {
        const auto& s = deref(series, "series");
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        GarchOrder order{p, q};
        order.validate();
        auto handle = std::make_unique<gm_fit>();
        handle->score = to_score(score);
        FitConfig& config = handle->config;
        config.score = handle->score;
        if (options != nullptr) {
            config.max_iter = options->max_iter;
            config.rel_tol = options->rel_tol;
            config.alpha_dot = options->alpha_dot;
            config.alpha_floor = options->alpha_floor;
            if (options->initial != nullptr) {
                config.initial = to_theta(p, q, options->initial);
            }
        }
        handle->result = fit(s.data, order, config);
        *out = handle.release();
    });
}

void gm_fit_free(gm_fit* fit) { delete fit; }

int gm_fit_dim(const gm_fit* fit) {
    return fit == nullptr ? 0 : fit->result.theta_hat.order.dim();
}

gm_status gm_fit_theta(const gm_fit* fit, double* out) {
    return guarded([&] {
        const auto& f = deref(fit, "fit");
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        const Eigen::VectorXd v = f.result.theta_hat.to_vector();
        for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[i];
    });
}

int gm_fit_converged(const gm_fit* fit) {
    return fit != nullptr && fit->result.converged ? 1 : 0;
}

int gm_fit_iterations(const gm_fit* fit) {
    return fit == nullptr ? 0 : fit->result.iterations;
}

double gm_fit_m_norm(const gm_fit* fit) { return fit == nullptr ? 0.0 : fit->result.m_norm; }

size_t gm_fit_residual_count(const gm_fit* fit) {
    return fit == nullptr ? 0 : fit->result.residuals.size();
}

gm_status gm_fit_residuals(const gm_fit* fit, double* out) {
    return guarded([&] {
        const auto& f = deref(fit, "fit");
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        std::memcpy(out, f.result.residuals.data(),
                    f.result.residuals.size() * sizeof(double));
    });
}

size_t gm_fit_trace_length(const gm_fit* fit) {
    return fit == nullptr ? 0 : fit->result.trace.size();
}

gm_status gm_fit_trace(const gm_fit* fit, double* out) {
    return guarded([&] {
        const auto& f = deref(fit, "fit");
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        const int k = f.result.theta_hat.order.dim();
        for (std::size_t i = 0; i < f.result.trace.size(); ++i) {
            for (int j = 0; j < k; ++j) out[i * static_cast<std::size_t>(k) + j] =
                f.result.trace[i][j];
        }
    });
}

void gm_boot_options_init(gm_boot_options* options) {
    if (options == nullptr) return;
    const BootstrapOptions defaults;
    options->max_iter = defaults.max_iter;
    options->cache = defaults.cache ? 1 : 0;
    options->threads = defaults.threads;
}

gm_status gm_generate_weights(gm_weight_scheme scheme, size_t n, uint64_t seed,
                              double* out) {
    return guarded([&] {
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        const auto w = generate_weights(to_scheme(scheme), n, seed);
        std::memcpy(out, w.data(), w.size() * sizeof(double));
    });
}

gm_status gm_bootstrap_run(const gm_series* series, const gm_fit* fit,
                           gm_weight_scheme scheme, int B, uint64_t seed,
                           const gm_boot_options* options, gm_boot** out) {
    return guarded([&] {
        const auto& s = deref(series, "series");
        const auto& f = deref(fit, "fit");
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        BootstrapOptions opts;
        if (options != nullptr) {
            opts.max_iter = options->max_iter;
            opts.cache = options->cache != 0;
            opts.threads = options->threads;
        }
        auto handle = std::make_unique<gm_boot>();
        handle->run =
            bootstrap_fit(s.data, f.result, f.config, to_scheme(scheme), B, seed, opts);
        *out = handle.release();
    });
}

void gm_boot_free(gm_boot* boot) { delete boot; }

int gm_boot_replicate_count(const gm_boot* boot) {
    return boot == nullptr ? 0 : static_cast<int>(boot->run.replicates.rows());
}

int gm_boot_dim(const gm_boot* boot) {
    return boot == nullptr ? 0 : static_cast<int>(boot->run.replicates.cols());
}

gm_status gm_boot_replicates(const gm_boot* boot, double* out) {
    return guarded([&] {
        const auto& b = deref(boot, "boot");
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        const auto& m = b.run.replicates;
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            for (Eigen::Index c = 0; c < m.cols(); ++c) {
                out[r * m.cols() + c] = m(r, c);
            }
        }
    });
}

gm_status gm_boot_converged_flags(const gm_boot* boot, int* out) {
    return guarded([&] {
        const auto& b = deref(boot, "boot");
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        for (std::size_t i = 0; i < b.run.replicate_converged.size(); ++i) {
            out[i] = b.run.replicate_converged[i];
        }
    });
}

int gm_boot_converged_count(const gm_boot* boot) {
    return boot == nullptr ? 0 : boot->run.b_converged;
}

int gm_boot_excessive_failures(const gm_boot* boot) {
    return boot != nullptr && boot->run.excessive_failures ? 1 : 0;
}

double gm_boot_sigma_n(const gm_boot* boot) {
    return boot == nullptr ? 0.0 : boot->run.sigma_n;
}

gm_status gm_bootstrap_ci(const gm_boot* boot, double level, double* lo, double* hi) {
    return guarded([&] {
        const auto& b = deref(boot, "boot");
        if (lo == nullptr || hi == nullptr) throw InvalidArgumentError("lo/hi is NULL");
        const auto cis = bootstrap_ci(b.run, level);
        for (std::size_t j = 0; j < cis.size(); ++j) {
            lo[j] = cis[j].lo;
            hi[j] = cis[j].hi;
        }
    });
}

gm_status gm_bootstrap_bias_mse(const gm_boot* boot, double* bias, double* mse) {
    return guarded([&] {
        const auto& b = deref(boot, "boot");
        if (bias == nullptr || mse == nullptr) throw InvalidArgumentError("bias/mse is NULL");
        Eigen::VectorXd vb, vm;
        bootstrap_bias_mse(b.run, vb, vm);
        for (Eigen::Index j = 0; j < vb.size(); ++j) {
            bias[j] = vb[j];
            mse[j] = vm[j];
        }
    });
}

gm_status gm_covariance(const gm_series* series, const gm_fit* fit, double* cov,
                        double* sigma2_h) {
    return guarded([&] {
        const auto& s = deref(series, "series");
        const auto& f = deref(fit, "fit");
        if (cov == nullptr) throw InvalidArgumentError("cov is NULL");
        const AsymptoticCovariance ac = estimate_covariance(s.data, f.result, f.score);
        const int k = f.result.theta_hat.order.dim();
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) cov[i * k + j] = ac.cov(i, j);
        }
        if (sigma2_h != nullptr) *sigma2_h = ac.sigma2_h;
    });
}

gm_status gm_normal_ci(const gm_fit* fit, const double* cov, double level, double* lo,
                       double* hi) {
    return guarded([&] {
        const auto& f = deref(fit, "fit");
        if (cov == nullptr || lo == nullptr || hi == nullptr) {
            throw InvalidArgumentError("cov/lo/hi is NULL");
        }
        const int k = f.result.theta_hat.order.dim();
        AsymptoticCovariance ac;
        ac.cov.resize(k, k);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) ac.cov(i, j) = cov[i * k + j];
        }
        const auto cis = normal_ci(f.result, ac, level);
        for (std::size_t j = 0; j < cis.size(); ++j) {
            lo[j] = cis[j].lo;
            hi[j] = cis[j].hi;
        }
    });
}

gm_status gm_normalized_volatility(const gm_series* series, const gm_fit* fit,
                                   double* u_out) {
    return guarded([&] {
        const auto& s = deref(series, "series");
        const auto& f = deref(fit, "fit");
        if (u_out == nullptr) throw InvalidArgumentError("u_out is NULL");
        const VolatilitySeries vol = normalized_volatility(f.result, s.data);
        std::memcpy(u_out, vol.u.data(), vol.u.size() * sizeof(double));
    });
}

gm_status gm_qq_against_t(const double* residuals, size_t n, double d, double* sorted_out,
                          double* ref_out, double* tail_slope_out) {
    return guarded([&] {
        if (residuals == nullptr || sorted_out == nullptr || ref_out == nullptr) {
            throw InvalidArgumentError("gm_qq_against_t: NULL argument");
        }
        std::vector<double> r(residuals, residuals + n);
        const QQData qq = qq_against_t(r, d);
        std::memcpy(sorted_out, qq.sorted_residuals.data(), n * sizeof(double));
        std::memcpy(ref_out, qq.reference_quantiles.data(), n * sizeof(double));
        if (tail_slope_out != nullptr) *tail_slope_out = qq.tail_slope;
    });
}

gm_status gm_t_quantile(double prob, double d, double* out) {
    return guarded([&] {
        if (out == nullptr) throw InvalidArgumentError("out is NULL");
        *out = student_t_quantile(prob, d);
    });
}

gm_status gm_run_bias_mse(const char* spec_json, char** report_json) {
    return guarded([&] {
        if (spec_json == nullptr || report_json == nullptr) {
            throw InvalidArgumentError("gm_run_bias_mse: NULL argument");
        }
        const ExperimentSpec spec = experiment_spec_from_json(Json::parse(spec_json));
        const BiasMseReport report = bias_mse_study(spec);
        *report_json = dup_string(bias_mse_report_json(spec, report).dump());
    });
}

gm_status gm_run_coverage(const char* spec_json, double level, char** report_json) {
    return guarded([&] {
        if (spec_json == nullptr || report_json == nullptr) {
            throw InvalidArgumentError("gm_run_coverage: NULL argument");
        }
        const ExperimentSpec spec = experiment_spec_from_json(Json::parse(spec_json));
        const CoverageReport report = coverage_study(spec, level);
        *report_json = dup_string(coverage_report_json(spec, level, report).dump());
    });
}

gm_status gm_run_misspec(const char* spec_json, char** report_json) {
    return guarded([&] {
        if (spec_json == nullptr || report_json == nullptr) {
            throw InvalidArgumentError("gm_run_misspec: NULL argument");
        }
        const ExperimentSpec spec = experiment_spec_from_json(Json::parse(spec_json));
        const MisspecReport report = misspecification_study(spec);
        *report_json = dup_string(misspec_report_json(spec, report).dump());
    });
}

gm_status gm_run_ch_table(const char* rows_json, const char* scores_json, size_t samples,
                          uint64_t seed, char** report_json) {
    return guarded([&] {
        if (rows_json == nullptr || scores_json == nullptr || report_json == nullptr) {
            throw InvalidArgumentError("gm_run_ch_table: NULL argument");
        }
        std::vector<ErrorDistribution> dists;
        for (const auto& j : Json::parse(rows_json)) dists.push_back(dist_from_json(j));
        std::vector<ScoreFunction> scores;
        for (const auto& j : Json::parse(scores_json)) scores.push_back(score_from_json(j));
        const ChTable table = compute_ch_table(dists, scores, samples, seed);
        *report_json = dup_string(ch_table_json(table).dump());
    });
}

}  // extern "C"
