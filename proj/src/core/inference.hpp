#pragma once

#include <Eigen/Dense>
#include <vector>

#include "core/bootstrap.hpp"
#include "core/mest.hpp"

namespace garchm {

struct AsymptoticCovariance {
    double sigma2_h = 0.0;   // 4 Var{H(r)} / [mean{r Hdot(r)}]^2 over residuals
    Eigen::MatrixXd g_hat;   // (1/n) sum vdot vdot' / v^2 at theta_hat
    Eigen::MatrixXd cov;     // sigma2_h * g_hat^{-1}
};

// Plug-in estimate of the asymptotic covariance sigma^2(H) G^{-1} of
// sqrt(n) (theta_hat - theta_0H).
AsymptoticCovariance estimate_covariance(const SeriesData& data, const FitResult& fit,
                                         const ScoreFunction& score);

// [g +- n^{-1/2} d z_{1-a/2}] with d^2 the coordinate's diagonal of cov.
std::vector<Interval> normal_ci(const FitResult& fit, const AsymptoticCovariance& cov,
                                double level);

}  // namespace garchm
