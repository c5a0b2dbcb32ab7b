#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "core/bootstrap.hpp"
#include "core/inference.hpp"

namespace garchm {

// One Monte Carlo study: simulate R paths from the DGP, fit every listed
// estimator, optionally bootstrap each fit under every listed scheme.
struct ExperimentSpec {
    ParameterVector theta0;          // DGP truth; theta0.order is the DGP order
    ErrorDistribution dist = ErrorDistribution::normal();
    int n = 1000;
    int burn_in = 500;
    std::vector<ScoreFunction> estimators;
    int R = 200;
    int B = 0;                       // bootstrap replicates per fit (0 = none)
    std::vector<WeightScheme> schemes;
    std::optional<GarchOrder> fit_order;  // may exceed the DGP order
    std::uint64_t seed = 1;
    int threads = 0;                 // 0 = hardware concurrency

    GarchOrder effective_fit_order() const { return fit_order.value_or(theta0.order); }
    void validate() const;
};

struct EstimatorReplicates {
    ScoreFunction score;
    double ch = 1.0;                 // c_H(score, dist), solved once per study
    Eigen::MatrixXd estimates;       // R x fit dim (rows of non-converged fits kept)
    std::vector<char> converged;
    int n_converged = 0;
};

struct ReplicateTable {
    GarchOrder fit_order;
    int n = 0;
    int R = 0;
    std::vector<EstimatorReplicates> estimators;
};

ReplicateTable run_replications(const ExperimentSpec& spec);

struct BiasMse {
    Eigen::VectorXd bias;
    Eigen::VectorXd mse;
    int used = 0;        // converged replicates entering the summary
    bool present = true; // false when fewer than half the replicates converged
};

// Eq.-style summaries over converged replicates. omega/alpha coordinates are
// divided by c_H before differencing against theta0; beta is compared as is.
BiasMse standardized_bias_mse(const EstimatorReplicates& reps, const ParameterVector& theta0,
                              double ch);
// sqrt(n)-scaled errors against theta_0H = (c_H omega, c_H alpha.., beta..).
BiasMse normalized_bias_mse(const EstimatorReplicates& reps, const ParameterVector& theta0h,
                            int n);

struct BiasMseReport {
    ReplicateTable table;
    ParameterVector theta0;
    std::vector<BiasMse> standardized;  // per estimator
    std::vector<BiasMse> normalized;
};

BiasMseReport bias_mse_study(const ExperimentSpec& spec);

struct CoverageCell {
    std::string method;            // "scheme-M", "scheme-E", "scheme-U", "asymptotic"
    Eigen::VectorXd coverage_pct;  // per coordinate
    int eligible = 0;              // replications that produced this CI
};

struct CoverageEstimatorReport {
    ScoreFunction score;
    double ch = 1.0;
    int n_converged = 0;
    std::vector<CoverageCell> cells;
};

struct CoverageReport {
    double level = 0.9;
    int R = 0;
    ReplicateTable table;
    std::vector<CoverageEstimatorReport> estimators;
};

CoverageReport coverage_study(const ExperimentSpec& spec, double level);

// GARCH(1,1) truth fitted under a larger order; the padded alpha coordinates
// have true value 0.
struct MisspecReport {
    ReplicateTable table;
    ParameterVector theta0_embedded;
    std::vector<BiasMse> standardized;
};

MisspecReport misspecification_study(const ExperimentSpec& spec);

struct ChTable {
    std::vector<ErrorDistribution> dists;
    std::vector<ScoreFunction> scores;
    Eigen::MatrixXd values;  // dists x scores
    std::size_t samples = 0; // 0 = quadrature
    std::uint64_t seed = 0;
};

ChTable compute_ch_table(const std::vector<ErrorDistribution>& dists,
                         const std::vector<ScoreFunction>& scores, std::size_t samples,
                         std::uint64_t seed);

// fraction of intervals containing the truth, in percent
double coverage_percent(const std::vector<char>& covered, int eligible);

}  // namespace garchm
