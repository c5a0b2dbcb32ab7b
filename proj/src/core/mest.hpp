#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "core/garch.hpp"
#include "core/score.hpp"

namespace garchm {

struct FitConfig {
    ScoreFunction score;
    double alpha_dot = 0.0;  // <= 0: alpha_dot(1) under the standard normal proxy
    int max_iter = 200;
    double rel_tol = 1e-8;        // relative l-inf change of the iterate
    double residual_tol = 1e-6;   // Gram-scaled fixed-point residual
    std::optional<ParameterVector> initial;

    // Parameter box. The alpha floor is negative so boundary fits (true
    // alpha_i = 0 under an over-fitted order) keep estimates on both sides
    // of zero; candidates that break filter positivity are damped away.
    double omega_floor = 1e-12;
    double alpha_floor = -0.25;
    double alpha_cap = 1.0 - 1e-6;
    double beta_floor = 1e-12;
    double beta_cap = 1.0 - 1e-6;

    double resolved_alpha_dot() const {
        return alpha_dot > 0.0 ? alpha_dot : default_alpha_dot(score);
    }
};

struct FitResult {
    ParameterVector theta_hat;
    int iterations = 0;
    bool converged = false;
    // max_j |M_j(theta_hat)| / (n_eff * sqrt(G_jj)), the per-coordinate
    // estimating-equation residual scaled by the Gram diagonal
    double m_norm = 0.0;
    std::vector<double> residuals;  // X_t / sqrt(v_hat_t(theta_hat))
    std::vector<Eigen::VectorXd> trace;
};

// M_{n,H}(theta) = sum_t {1 - H(X_t/sqrt(v_t))} vdot_t / v_t.
Eigen::VectorXd estimating_function(const ParameterVector& theta, const SeriesData& data,
                                    const ScoreFunction& score);

// One iteratively re-weighted update with step damping and box projection.
ParameterVector irls_step(const ParameterVector& theta, const SeriesData& data,
                          const FitConfig& config);

FitResult fit(const SeriesData& data, GarchOrder order, const FitConfig& config);

// --- shared machinery (also used by the bootstrap) -------------------------

// Per-observation tables at a fixed theta:
//   a: rows (1 - H(r_t)) vdot_t / v_t          (summands of M)
//   gpack: rows of vdot_t vdot_t' / v_t^2, upper triangle packed
// Reducing them against a weight vector gives the weighted estimating
// function and weighted Gram; reducing against ones gives the plain ones.
class MestWorkspace {
public:
    bool build(const ParameterVector& theta, const SeriesData& data,
               const ScoreFunction& score);  // false if the filter degenerates
    void reduce(const double* weights, Eigen::VectorXd& m, Eigen::MatrixXd& gram) const;

    const std::vector<double>& filter_values() const { return v_; }
    int dim() const { return k_; }

private:
    int k_ = 0;
    std::vector<double> v_;
    Eigen::MatrixXd a_;
    Eigen::MatrixXd gpack_;
};

// Gram-scaled sup-norm residual: max_j |m_j| / sqrt(n * gram_jj).
double scaled_residual(const Eigen::VectorXd& m, const Eigen::MatrixXd& gram, std::size_t n);

Eigen::VectorXd project_to_box(const Eigen::VectorXd& v, GarchOrder order,
                               const FitConfig& config);

ParameterVector default_initial(const SeriesData& data, GarchOrder order);

// Shared IRLS driver. `weights` may be null (all ones); `warm_tables`, when
// non-null, must hold tables built at `start` and is used for the first
// iteration only (the bootstrap cache). Returns iterations via out-params.
struct IrlsOutcome {
    Eigen::VectorXd theta;
    int iterations = 0;
    bool converged = false;
    double residual = 0.0;
    std::vector<Eigen::VectorXd> trace;
};
IrlsOutcome run_irls(GarchOrder order, const Eigen::VectorXd& start, const SeriesData& data,
                     const FitConfig& config, int max_iter, const double* weights,
                     const MestWorkspace* warm_tables, bool keep_trace);

}  // namespace garchm
