#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "core/distribution.hpp"

namespace garchm {

// Model orders with known coefficient recursions: (1,1), (2,1), (1,2), (2,2).
struct GarchOrder {
    int p = 1;
    int q = 1;

    int dim() const { return 1 + p + q; }
    void validate() const;
    bool operator==(const GarchOrder&) const = default;
};

// theta = (omega, alpha_1..alpha_p, beta_1..beta_q). Estimation may place
// alpha coordinates at (or slightly below) zero when the true parameter sits
// on the boundary; DGP use requires strict positivity, checked separately.
struct ParameterVector {
    GarchOrder order;
    double omega = 0.0;
    std::vector<double> alpha;
    std::vector<double> beta;

    static ParameterVector from_vector(GarchOrder order, const Eigen::VectorXd& v);
    Eigen::VectorXd to_vector() const;

    void validate() const;  // omega > 0, alpha_i >= 0, beta_j in (0,1), sum beta < 1
    double beta_sum() const;
    double c0() const;  // omega / (1 - sum beta)

    std::string describe() const;
};

struct SeriesData {
    std::vector<double> x;
    std::string meta;

    std::size_t n() const { return x.size(); }
    void validate() const;  // non-empty, all finite
};

// c_0(theta) .. c_count(theta) of the almost-sure variance representation.
std::vector<double> coefficients(const ParameterVector& theta, std::size_t count);

// (count+1) x dim matrix of dc_j/dtheta, by differentiating the recursion.
Eigen::MatrixXd coefficient_gradients(const ParameterVector& theta, std::size_t count);

struct VarianceFilterOutput {
    std::vector<double> v;  // v_hat_t, t = 1..n; v_t >= c_0 > 0
    Eigen::MatrixXd grad;   // n x dim, rows are the exact gradients
};

// Observable variance filter v_hat_t = c_0 + sum_{j=1}^{t-1} c_j X_{t-j}^2,
// evaluated in O(n (p+q)) through the equivalent recursive form; the direct
// coefficient sum is kept in the tests as an oracle.
VarianceFilterOutput variance_filter(const ParameterVector& theta, const SeriesData& data);

namespace detail {
// No argument validation: the IRLS solver evaluates candidate points whose
// alpha coordinates may be negative. Caller guarantees sum(beta) < 1.
VarianceFilterOutput filter_unchecked(const ParameterVector& theta,
                                      const std::vector<double>& x);
void filter_values_unchecked(const ParameterVector& theta, const std::vector<double>& x,
                             std::vector<double>& v_out);
}  // namespace detail

// Path simulation from the exact recursion, discarding burn_in observations.
// Pre-sample states start at the unconditional variance; innovations come
// from `dist` (see simulate_path_with for the injectable-generator variant).
SeriesData simulate_path(const ParameterVector& theta, const ErrorDistribution& dist,
                         std::size_t n, std::size_t burn_in, std::uint64_t seed);

// Generator hook used by tests (e.g. degenerate eps == 0) and by
// simulate_path. `innovation_second_moment` enters the stationarity check
// E(eps^2) sum(alpha) + sum(beta) < 1 and the initial variance.
template <typename Gen>
SeriesData simulate_path_with(const ParameterVector& theta, std::size_t n,
                              std::size_t burn_in, double innovation_second_moment,
                              Gen&& gen);

// (c_H omega, c_H alpha_1.., beta..), the transformed target of M-estimation.
ParameterVector scale_by_ch(const ParameterVector& theta, double ch);

// Zero-pad alpha/beta into a larger order (misspecification studies).
ParameterVector embed(const ParameterVector& theta, GarchOrder target);

}  // namespace garchm

#include "core/garch_impl.hpp"
