#include "core/bootstrap.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/parallel.hpp"
#include "core/rng.hpp"

namespace garchm {

std::string scheme_name(WeightScheme scheme) {
    switch (scheme) {
        case WeightScheme::M: return "M";
        case WeightScheme::E: return "E";
        case WeightScheme::U: return "U";
    }
    return "?";
}

WeightScheme parse_scheme(const std::string& name) {
    if (name == "M" || name == "m") return WeightScheme::M;
    if (name == "E" || name == "e") return WeightScheme::E;
    if (name == "U" || name == "u") return WeightScheme::U;
    throw InvalidArgumentError("unknown weight scheme '" + name + "'");
}

std::vector<double> generate_weights(WeightScheme scheme, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw InvalidArgumentError("generate_weights: n must be at least 2");
    Rng rng(seed);
    std::vector<double> w(n, 0.0);
    switch (scheme) {
        case WeightScheme::M:
            for (std::size_t t = 0; t < n; ++t) w[rng.next_index(n)] += 1.0;
            break;
        case WeightScheme::E: {
            double sum = 0.0;
            for (auto& v : w) {
                v = rng.exponential();
                sum += v;
            }
            const double scale = static_cast<double>(n) / sum;
            for (auto& v : w) v *= scale;
            break;
        }
        case WeightScheme::U: {
            double sum = 0.0;
            for (auto& v : w) {
                v = rng.uniform(0.5, 1.5);
                sum += v;
            }
            const double scale = static_cast<double>(n) / sum;
            for (auto& v : w) v *= scale;
            break;
        }
    }
    return w;
}

Eigen::VectorXd weighted_estimating_function(const ParameterVector& theta,
                                             const SeriesData& data,
                                             const ScoreFunction& score,
                                             const std::vector<double>& weights) {
    theta.validate();
    data.validate();
    if (weights.size() != data.n()) {
        throw InvalidArgumentError("weights length must equal the series length");
    }
    MestWorkspace ws;
    if (!ws.build(theta, data, score)) {
        throw InvalidArgumentError("weighted_estimating_function: degenerate filter");
    }
    Eigen::VectorXd m;
    Eigen::MatrixXd gram;
    ws.reduce(weights.data(), m, gram);
    return m;
}

namespace {

// within-replicate sample variance of the weights around their mean 1
double weight_variance(const std::vector<double>& w) {
    double acc = 0.0;
    for (double v : w) {
        const double d = v - 1.0;
        acc += d * d;
    }
    return acc / static_cast<double>(w.size() - 1);
}

BootstrapRun run_bootstrap(const SeriesData& data, const FitResult& fit,
                           const FitConfig& config, int B,
                           const std::function<std::vector<double>(int)>& weights_for,
                           WeightScheme scheme, const BootstrapOptions& options) {
    if (!fit.converged) {
        throw InvalidArgumentError("bootstrap requires a converged fit");
    }
    if (B < 1) throw InvalidArgumentError("bootstrap requires B >= 1");
    data.validate();

    const GarchOrder order = fit.theta_hat.order;
    const int k = order.dim();
    const Eigen::VectorXd center = fit.theta_hat.to_vector();

    // per-t summands at theta_hat, shared read-only across replicates
    MestWorkspace cache;
    if (options.cache) {
        if (!cache.build(fit.theta_hat, data, config.score)) {
            throw InvalidArgumentError("bootstrap: filter degenerates at theta_hat");
        }
    }

    BootstrapRun run;
    run.theta_hat = fit.theta_hat;
    run.scheme = scheme;
    run.n = data.n();
    run.replicates.resize(B, k);
    run.replicate_converged.assign(static_cast<std::size_t>(B), 0);

    std::vector<double> variances(static_cast<std::size_t>(B), 0.0);
    FitConfig boot_config = config;
    boot_config.initial.reset();

    parallel_for(static_cast<std::size_t>(B), options.threads, [&](std::size_t b) {
        const std::vector<double> w = weights_for(static_cast<int>(b));
        variances[b] = weight_variance(w);
        try {
            const IrlsOutcome out =
                run_irls(order, center, data, boot_config, options.max_iter, w.data(),
                         options.cache ? &cache : nullptr, false);
            run.replicates.row(static_cast<Eigen::Index>(b)) = out.theta.transpose();
            run.replicate_converged[b] = out.converged ? 1 : 0;
        } catch (const SingularMatrixError&) {
            run.replicates.row(static_cast<Eigen::Index>(b)) = center.transpose();
            run.replicate_converged[b] = 0;
        }
    });

    double pooled = 0.0;
    for (double v : variances) pooled += v;
    run.sigma_n = std::sqrt(pooled / static_cast<double>(B));
    run.b_converged = 0;
    for (char c : run.replicate_converged) run.b_converged += c;
    run.excessive_failures = (B - run.b_converged) * 20 > B;  // >5% dropped
    return run;
}

}  // namespace

BootstrapRun bootstrap_fit(const SeriesData& data, const FitResult& fit,
                           const FitConfig& config, WeightScheme scheme, int B,
                           std::uint64_t seed, const BootstrapOptions& options) {
    auto weights_for = [&, seed](int b) {
        return generate_weights(scheme, data.n(),
                                derive_seed(seed, static_cast<std::uint64_t>(b) + 1));
    };
    return run_bootstrap(data, fit, config, B, weights_for, scheme, options);
}

BootstrapRun bootstrap_fit_with(const SeriesData& data, const FitResult& fit,
                                const FitConfig& config, int B,
                                const std::function<std::vector<double>(int)>& weights_for,
                                const BootstrapOptions& options) {
    return run_bootstrap(data, fit, config, B, weights_for, WeightScheme::U, options);
}

double sorted_quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw InvalidArgumentError("quantile of an empty sample");
    if (sorted.size() == 1) return sorted[0];
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::clamp(
        std::floor(h), 0.0, static_cast<double>(sorted.size() - 1)));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<Interval> bootstrap_ci(const BootstrapRun& run, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InvalidArgumentError("confidence level must lie in (0,1)");
    }
    if (run.b_converged < 50) {
        throw TooFewReplicatesError("bootstrap_ci needs at least 50 converged replicates, got " +
                                    std::to_string(run.b_converged));
    }
    const double alpha = 1.0 - level;
    const int k = run.theta_hat.order.dim();
    const Eigen::VectorXd center = run.theta_hat.to_vector();
    std::vector<Interval> out(static_cast<std::size_t>(k));

    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(run.b_converged));
    for (int j = 0; j < k; ++j) {
        values.clear();
        for (Eigen::Index b = 0; b < run.replicates.rows(); ++b) {
            if (run.replicate_converged[static_cast<std::size_t>(b)]) {
                values.push_back(run.replicates(b, j));
            }
        }
        std::sort(values.begin(), values.end());
        const double q_lo = sorted_quantile(values, alpha / 2.0);
        const double q_hi = sorted_quantile(values, 1.0 - alpha / 2.0);
        double lo = center[j] - (q_hi - center[j]) / run.sigma_n;
        double hi = center[j] - (q_lo - center[j]) / run.sigma_n;
        if (lo > hi) std::swap(lo, hi);
        out[static_cast<std::size_t>(j)] = {lo, hi};
    }
    return out;
}

void bootstrap_bias_mse(const BootstrapRun& run, Eigen::VectorXd& bias,
                        Eigen::VectorXd& mse) {
    if (run.b_converged < 1) {
        throw TooFewReplicatesError("bootstrap_bias_mse needs a converged replicate");
    }
    const int k = run.theta_hat.order.dim();
    const Eigen::VectorXd center = run.theta_hat.to_vector();
    const double scale = std::sqrt(static_cast<double>(run.n)) / run.sigma_n;
    bias = Eigen::VectorXd::Zero(k);
    mse = Eigen::VectorXd::Zero(k);
    for (Eigen::Index b = 0; b < run.replicates.rows(); ++b) {
        if (!run.replicate_converged[static_cast<std::size_t>(b)]) continue;
        const Eigen::VectorXd d = scale * (run.replicates.row(b).transpose() - center);
        bias += d;
        mse += d.cwiseProduct(d);
    }
    bias /= run.b_converged;
    mse /= run.b_converged;
}

}  // namespace garchm
