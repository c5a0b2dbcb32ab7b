#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/mest.hpp"

namespace garchm {

// Exchangeable bootstrap weight schemes: M multinomial(n, 1/n..), E i.i.d.
// exponential(1) normalized to sum n, U i.i.d. uniform(0.5, 1.5) normalized.
enum class WeightScheme { M, E, U };

std::string scheme_name(WeightScheme scheme);
WeightScheme parse_scheme(const std::string& name);

std::vector<double> generate_weights(WeightScheme scheme, std::size_t n, std::uint64_t seed);

Eigen::VectorXd weighted_estimating_function(const ParameterVector& theta,
                                             const SeriesData& data,
                                             const ScoreFunction& score,
                                             const std::vector<double>& weights);

struct BootstrapRun {
    ParameterVector theta_hat;         // center, the original M-estimate
    Eigen::MatrixXd replicates;        // B x dim, row b = theta*_b
    std::vector<char> replicate_converged;
    int b_converged = 0;
    bool excessive_failures = false;   // more than 5% non-converged
    double sigma_n = 0.0;              // pooled weight standard deviation
    WeightScheme scheme = WeightScheme::U;
    std::size_t n = 0;                 // series length behind the replicates
};

struct BootstrapOptions {
    int max_iter = 100;  // warm start at theta_hat; slack for step-damped stragglers
    bool cache = true;  // store the per-t summands at theta_hat across b
    int threads = 1;
};

BootstrapRun bootstrap_fit(const SeriesData& data, const FitResult& fit,
                           const FitConfig& config, WeightScheme scheme, int B,
                           std::uint64_t seed, const BootstrapOptions& options = {});

// Test hook: identical machinery with caller-supplied weights per replicate.
BootstrapRun bootstrap_fit_with(const SeriesData& data, const FitResult& fit,
                                const FitConfig& config, int B,
                                const std::function<std::vector<double>(int)>& weights_for,
                                const BootstrapOptions& options = {});

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x) const { return lo <= x && x <= hi; }
};

// Confidence interval from the replicate quantiles, scaled by 1/sigma_n:
// [g - (q_{1-a/2} - g)/sigma_n, g - (q_{a/2} - g)/sigma_n], endpoints ordered.
std::vector<Interval> bootstrap_ci(const BootstrapRun& run, double level);

// Bias and MSE of sigma_n^{-1} sqrt(n) (theta*_b - theta_hat) over converged
// replicates; MSE is the entrywise square.
void bootstrap_bias_mse(const BootstrapRun& run, Eigen::VectorXd& bias,
                        Eigen::VectorXd& mse);

// Linear-interpolation sample quantile of a sorted vector.
double sorted_quantile(const std::vector<double>& sorted, double p);

}  // namespace garchm
