#pragma once

#include <vector>

#include "core/mest.hpp"

namespace garchm {

// u_t = v_hat_t(theta_hat) / sum_i v_hat_i(theta_hat); sums to 1 and is
// invariant under c_H rescaling of (omega, alpha), so volatility paths from
// different scores are directly comparable.
struct VolatilitySeries {
    std::vector<double> u;
};

VolatilitySeries normalized_volatility(const FitResult& fit, const SeriesData& data);

struct QQData {
    std::vector<double> sorted_residuals;
    std::vector<double> reference_quantiles;  // t(d) quantiles at (i-0.5)/n
    double d = 0.0;
    // least-squares slope of the upper-decile QQ points through the origin,
    // minus one; positive means the residual tail is heavier than t(d)
    double tail_slope = 0.0;
};

QQData qq_against_t(const std::vector<double>& residuals, double d);

}  // namespace garchm
