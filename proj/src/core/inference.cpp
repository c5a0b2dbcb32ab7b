#include "core/inference.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/linalg.hpp"
#include "core/special.hpp"

namespace garchm {

AsymptoticCovariance estimate_covariance(const SeriesData& data, const FitResult& fit,
                                         const ScoreFunction& score) {
    if (!fit.converged) {
        throw InvalidArgumentError("estimate_covariance requires a converged fit");
    }
    data.validate();
    const std::size_t n = data.n();
    if (fit.residuals.size() != n) {
        throw InvalidArgumentError("fit residuals do not match the series length");
    }
    const int k = fit.theta_hat.order.dim();

    const VarianceFilterOutput f = detail::filter_unchecked(fit.theta_hat, data.x);
    AsymptoticCovariance out;
    out.g_hat = Eigen::MatrixXd::Zero(k, k);
    double sum_h = 0.0, sum_h2 = 0.0, sum_rhdot = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const auto row = static_cast<Eigen::Index>(t);
        const double v = f.v[t];
        const Eigen::VectorXd g = f.grad.row(row).transpose() / v;
        out.g_hat.noalias() += g * g.transpose();
        const double r = fit.residuals[t];
        const double h = score.h(r);
        sum_h += h;
        sum_h2 += h * h;
        sum_rhdot += r * score.h_dot(r);
    }
    out.g_hat /= static_cast<double>(n);

    const double nn = static_cast<double>(n);
    const double mean_h = sum_h / nn;
    const double var_h = (sum_h2 - nn * mean_h * mean_h) / (nn - 1.0);
    const double mean_rhdot = sum_rhdot / nn;
    out.sigma2_h = 4.0 * std::max(var_h, 0.0) / (mean_rhdot * mean_rhdot);

    const SpdFactor factor(out.g_hat, "G_hat");
    out.cov = out.sigma2_h * factor.inverse();
    return out;
}

std::vector<Interval> normal_ci(const FitResult& fit, const AsymptoticCovariance& cov,
                                double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw InvalidArgumentError("confidence level must lie in (0,1)");
    }
    const double z = normal_quantile(0.5 + level / 2.0);
    const double n = static_cast<double>(fit.residuals.size());
    const Eigen::VectorXd center = fit.theta_hat.to_vector();
    std::vector<Interval> out(static_cast<std::size_t>(center.size()));
    for (Eigen::Index j = 0; j < center.size(); ++j) {
        const double d = std::sqrt(std::max(cov.cov(j, j), 0.0));
        const double half = d * z / std::sqrt(n);
        out[static_cast<std::size_t>(j)] = {center[j] - half, center[j] + half};
    }
    return out;
}

}  // namespace garchm
