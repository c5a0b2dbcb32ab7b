#include "core/mest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"
#include "core/linalg.hpp"

namespace garchm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mean_square(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc / static_cast<double>(x.size());
}

// Relative l-inf change with coordinate-class floors so boundary-adjacent
// alpha coordinates (values near 0) get an absolute criterion instead of an
// unattainable relative one. omega's floor follows the data scale, which
// keeps the whole rule scale-equivariant.
double relative_change(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                       double omega_scale) {
    double rel = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) {
        const double floor = (j == 0) ? 1e-3 * omega_scale : 1e-3;
        const double denom = std::max({std::abs(a[j]), std::abs(b[j]), floor});
        rel = std::max(rel, std::abs(a[j] - b[j]) / denom);
    }
    return rel;
}

}  // namespace

bool MestWorkspace::build(const ParameterVector& theta, const SeriesData& data,
                          const ScoreFunction& score) {
    k_ = theta.order.dim();
    const std::size_t n = data.n();
    if (!(theta.beta_sum() < 1.0) || !(theta.omega > 0.0)) return false;

    const VarianceFilterOutput f = detail::filter_unchecked(theta, data.x);
    v_ = f.v;
    a_.resize(static_cast<Eigen::Index>(n), k_);
    const int kk = k_ * (k_ + 1) / 2;
    gpack_.resize(static_cast<Eigen::Index>(n), kk);

    for (std::size_t t = 0; t < n; ++t) {
        const double v = v_[t];
        if (!(v > 0.0) || !std::isfinite(v)) return false;
        const auto row = static_cast<Eigen::Index>(t);
        const double r = data.x[t] / std::sqrt(v);
        const double gscale = (1.0 - score.h(r)) / v;
        if (!std::isfinite(gscale)) return false;
        const double w = 1.0 / (v * v);
        int idx = 0;
        for (int i = 0; i < k_; ++i) {
            const double xi = f.grad(row, i);
            a_(row, i) = gscale * xi;
            const double wxi = w * xi;
            for (int j = i; j < k_; ++j) {
                gpack_(row, idx++) = wxi * f.grad(row, j);
            }
        }
    }
    return true;
}

void MestWorkspace::reduce(const double* weights, Eigen::VectorXd& m,
                           Eigen::MatrixXd& gram) const {
    const Eigen::Index n = a_.rows();
    m = Eigen::VectorXd::Zero(k_);
    Eigen::VectorXd gp = Eigen::VectorXd::Zero(gpack_.cols());
    for (Eigen::Index t = 0; t < n; ++t) {
        const double w = weights ? weights[t] : 1.0;
        m.noalias() += w * a_.row(t).transpose();
        gp.noalias() += w * gpack_.row(t).transpose();
    }
    gram.resize(k_, k_);
    int idx = 0;
    for (int i = 0; i < k_; ++i) {
        for (int j = i; j < k_; ++j) {
            gram(i, j) = gp[idx];
            gram(j, i) = gp[idx];
            ++idx;
        }
    }
}

double scaled_residual(const Eigen::VectorXd& m, const Eigen::MatrixXd& gram,
                       std::size_t n) {
    double worst = 0.0;
    for (Eigen::Index j = 0; j < m.size(); ++j) {
        const double gjj = gram(j, j);
        if (!(gjj > 0.0)) {
            if (m[j] != 0.0) return kInf;
            continue;
        }
        worst = std::max(worst, std::abs(m[j]) / std::sqrt(static_cast<double>(n) * gjj));
    }
    return worst;
}

Eigen::VectorXd project_to_box(const Eigen::VectorXd& v, GarchOrder order,
                               const FitConfig& config) {
    Eigen::VectorXd out = v;
    out[0] = std::max(out[0], config.omega_floor);
    for (int i = 0; i < order.p; ++i) {
        out[1 + i] = std::clamp(out[1 + i], config.alpha_floor, config.alpha_cap);
    }
    double bsum = 0.0;
    for (int j = 0; j < order.q; ++j) {
        auto& b = out[1 + order.p + j];
        b = std::clamp(b, config.beta_floor, config.beta_cap);
        bsum += b;
    }
    if (bsum > config.beta_cap) {
        const double shrink = config.beta_cap / bsum;
        for (int j = 0; j < order.q; ++j) out[1 + order.p + j] *= shrink;
    }
    return out;
}

ParameterVector default_initial(const SeriesData& data, GarchOrder order) {
    ParameterVector theta;
    theta.order = order;
    theta.omega = std::max(0.1 * mean_square(data.x), 1e-12);
    theta.alpha.assign(static_cast<std::size_t>(order.p), 0.05);
    theta.beta.assign(static_cast<std::size_t>(order.q), 0.8 / order.q);
    return theta;
}

IrlsOutcome run_irls(GarchOrder order, const Eigen::VectorXd& start, const SeriesData& data,
                     const FitConfig& config, int max_iter, const double* weights,
                     const MestWorkspace* warm_tables, bool keep_trace) {
    const std::size_t n = data.n();
    const double omega_scale = 0.1 * mean_square(data.x);
    const double factor = 2.0 / config.resolved_alpha_dot();

    MestWorkspace ws_a, ws_b;
    const MestWorkspace* current = warm_tables;
    if (current == nullptr) {
        if (!ws_a.build(ParameterVector::from_vector(order, start), data, config.score)) {
            throw InvalidArgumentError("IRLS start point yields a degenerate variance filter");
        }
        current = &ws_a;
    }

    Eigen::VectorXd m;
    Eigen::MatrixXd gram;
    current->reduce(weights, m, gram);
    double residual = scaled_residual(m, gram, n);

    IrlsOutcome out;
    out.theta = start;
    for (int iter = 1; iter <= max_iter; ++iter) {
        // the estimating equation is already solved well under tolerance
        if (residual <= 0.1 * config.residual_tol) {
            out.converged = true;
            break;
        }
        const SpdFactor factorization(gram, "IRLS Gram");
        const Eigen::VectorXd step = factor * factorization.solve(-m);

        MestWorkspace* scratch = (current == &ws_a) ? &ws_b : &ws_a;
        Eigen::VectorXd cand;
        Eigen::VectorXd m2;
        Eigen::MatrixXd gram2;
        double res2 = kInf;
        bool accepted = false;
        // Halved steps until the residual shrinks; a plain 10x-growth cap is
        // not enough because an underestimated alpha_dot doubles the Newton
        // step, which cycles without ever growing the residual. The best
        // non-decreasing candidate within the 10x cap is the fallback.
        Eigen::VectorXd best_cand;
        double best_res = kInf;
        double lambda = 1.0;
        for (int attempt = 0; attempt <= 10; ++attempt) {
            Eigen::VectorXd raw = out.theta + lambda * step;
            // omega is a positive scale parameter: cap its per-iteration move
            // at a factor of 8 so one overshoot cannot collapse it to the floor
            raw[0] = std::clamp(raw[0], out.theta[0] / 8.0, out.theta[0] * 8.0);
            cand = project_to_box(raw, order, config);
            if (scratch->build(ParameterVector::from_vector(order, cand), data,
                               config.score)) {
                scratch->reduce(weights, m2, gram2);
                res2 = scaled_residual(m2, gram2, n);
                if (std::isfinite(res2) && res2 < best_res) {
                    best_res = res2;
                    best_cand = cand;
                }
                if (std::isfinite(res2) && res2 <= 0.99 * residual) {
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if (!accepted && best_res <= 10.0 * residual) {
            cand = best_cand;
            if (!scratch->build(ParameterVector::from_vector(order, cand), data,
                                config.score)) {
                throw SingularMatrixError("IRLS step cannot produce a usable iterate");
            }
            scratch->reduce(weights, m2, gram2);
            res2 = scaled_residual(m2, gram2, n);
            accepted = true;
        }
        if (!accepted) {
            // force nonnegative alpha; the filter is then positive by construction
            cand = project_to_box(out.theta + lambda * step, order, config);
            for (int i = 0; i < order.p; ++i) cand[1 + i] = std::max(cand[1 + i], 0.0);
            if (!scratch->build(ParameterVector::from_vector(order, cand), data,
                                config.score)) {
                throw SingularMatrixError("IRLS step cannot produce a usable iterate");
            }
            scratch->reduce(weights, m2, gram2);
            res2 = scaled_residual(m2, gram2, n);
        }

        const double rel = relative_change(out.theta, cand, omega_scale);
        out.theta = cand;
        current = scratch;
        m = std::move(m2);
        gram = std::move(gram2);
        residual = res2;
        out.iterations = iter;
        if (keep_trace) out.trace.push_back(out.theta);
        if ((rel < config.rel_tol && residual <= config.residual_tol) ||
            residual <= 0.1 * config.residual_tol) {
            out.converged = true;
            break;
        }
    }
    out.residual = residual;
    return out;
}

Eigen::VectorXd estimating_function(const ParameterVector& theta, const SeriesData& data,
                                    const ScoreFunction& score) {
    theta.validate();
    data.validate();
    MestWorkspace ws;
    if (!ws.build(theta, data, score)) {
        throw InvalidArgumentError("estimating_function: degenerate variance filter");
    }
    Eigen::VectorXd m;
    Eigen::MatrixXd gram;
    ws.reduce(nullptr, m, gram);
    return m;
}

ParameterVector irls_step(const ParameterVector& theta, const SeriesData& data,
                          const FitConfig& config) {
    data.validate();
    config.score.validate();
    const IrlsOutcome out =
        run_irls(theta.order, theta.to_vector(), data, config, 1, nullptr, nullptr, false);
    return ParameterVector::from_vector(theta.order, out.theta);
}

FitResult fit(const SeriesData& data, GarchOrder order, const FitConfig& config) {
    order.validate();
    data.validate();
    config.score.validate();
    if (data.n() < 10 * static_cast<std::size_t>(order.dim())) {
        throw DataError("fit requires at least 10*(1+p+q) observations");
    }

    Eigen::VectorXd start;
    if (config.initial.has_value()) {
        if (!(config.initial->order == order)) {
            throw InvalidArgumentError("initial point has a different order");
        }
        start = project_to_box(config.initial->to_vector(), order, config);
    } else {
        start = default_initial(data, order).to_vector();
    }

    IrlsOutcome out =
        run_irls(order, start, data, config, config.max_iter, nullptr, nullptr, true);

    FitResult result;
    result.theta_hat = ParameterVector::from_vector(order, out.theta);
    result.iterations = out.iterations;
    result.converged = out.converged;
    result.m_norm = out.residual;
    result.trace = std::move(out.trace);

    std::vector<double> v;
    detail::filter_values_unchecked(result.theta_hat, data.x, v);
    result.residuals.resize(data.n());
    for (std::size_t t = 0; t < data.n(); ++t) {
        result.residuals[t] = data.x[t] / std::sqrt(v[t]);
    }
    return result;
}

}  // namespace garchm
