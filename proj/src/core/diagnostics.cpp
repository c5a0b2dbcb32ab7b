#include "core/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"
#include "core/special.hpp"

namespace garchm {

VolatilitySeries normalized_volatility(const FitResult& fit, const SeriesData& data) {
    if (!fit.converged) {
        throw InvalidArgumentError("normalized_volatility requires a converged fit");
    }
    data.validate();
    std::vector<double> v;
    detail::filter_values_unchecked(fit.theta_hat, data.x, v);
    double total = 0.0;
    for (double value : v) total += value;
    VolatilitySeries out;
    out.u.resize(v.size());
    for (std::size_t t = 0; t < v.size(); ++t) out.u[t] = v[t] / total;
    return out;
}

QQData qq_against_t(const std::vector<double>& residuals, double d) {
    if (residuals.empty()) throw InvalidArgumentError("qq_against_t: residuals are empty");
    if (!(d > 0.0)) throw InvalidArgumentError("qq_against_t: d must be > 0");

    QQData out;
    out.d = d;
    out.sorted_residuals = residuals;
    std::sort(out.sorted_residuals.begin(), out.sorted_residuals.end());

    const std::size_t n = residuals.size();
    out.reference_quantiles.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        out.reference_quantiles[i] = student_t_quantile(p, d);
    }

    // upper decile, slope through the origin against the reference quantiles
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        if (p <= 0.9) continue;
        sxx += out.reference_quantiles[i] * out.reference_quantiles[i];
        sxy += out.reference_quantiles[i] * out.sorted_residuals[i];
    }
    out.tail_slope = (sxx > 0.0) ? sxy / sxx - 1.0 : 0.0;
    return out;
}

}  // namespace garchm
