#pragma once

#include <cmath>

#include "core/errors.hpp"

namespace garchm {

template <typename Gen>
SeriesData simulate_path_with(const ParameterVector& theta, std::size_t n,
                              std::size_t burn_in, double innovation_second_moment,
                              Gen&& gen) {
    theta.validate();
    if (!(theta.omega > 0.0)) throw InvalidArgumentError("simulate: omega must be > 0");
    if (n == 0) throw InvalidArgumentError("simulate: n must be positive");

    double alpha_sum = 0.0;
    for (double a : theta.alpha) alpha_sum += a;
    const double load = innovation_second_moment * alpha_sum + theta.beta_sum();
    if (!(load < 1.0)) {
        throw NonStationaryError("E(eps^2)*sum(alpha) + sum(beta) = " + std::to_string(load) +
                                 " >= 1");
    }

    const int p = theta.order.p, q = theta.order.q;
    const double var0 = theta.omega / (1.0 - load);
    // ring buffers of the last p squared observations / q variances
    std::vector<double> x2(static_cast<std::size_t>(p), 0.0);
    std::vector<double> s2(static_cast<std::size_t>(q), var0);

    const std::size_t total = burn_in + n;
    SeriesData out;
    out.x.reserve(n);
    for (std::size_t t = 0; t < total; ++t) {
        double v = theta.omega;
        for (int i = 0; i < p; ++i) v += theta.alpha[i] * x2[(t + p - 1 - i) % p];
        for (int j = 0; j < q; ++j) v += theta.beta[j] * s2[(t + q - 1 - j) % q];
        const double eps = gen();
        const double x = std::sqrt(v) * eps;
        x2[t % p] = x * x;
        s2[t % q] = v;
        if (t >= burn_in) out.x.push_back(x);
    }
    return out;
}

}  // namespace garchm
