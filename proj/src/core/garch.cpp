#include "core/garch.hpp"

#include <cmath>
#include <sstream>

#include "core/errors.hpp"

namespace garchm {

void GarchOrder::validate() const {
    const bool ok = (p == 1 && q == 1) || (p == 2 && q == 1) || (p == 1 && q == 2) ||
                    (p == 2 && q == 2);
    if (!ok) {
        throw InvalidArgumentError("unsupported GARCH order (" + std::to_string(p) + "," +
                                   std::to_string(q) + "); supported: (1,1),(2,1),(1,2),(2,2)");
    }
}

ParameterVector ParameterVector::from_vector(GarchOrder order, const Eigen::VectorXd& v) {
    order.validate();
    if (v.size() != order.dim()) {
        throw InvalidArgumentError("parameter vector has wrong length");
    }
    ParameterVector theta;
    theta.order = order;
    theta.omega = v[0];
    theta.alpha.assign(v.data() + 1, v.data() + 1 + order.p);
    theta.beta.assign(v.data() + 1 + order.p, v.data() + order.dim());
    return theta;
}

Eigen::VectorXd ParameterVector::to_vector() const {
    Eigen::VectorXd v(order.dim());
    v[0] = omega;
    for (int i = 0; i < order.p; ++i) v[1 + i] = alpha[static_cast<std::size_t>(i)];
    for (int j = 0; j < order.q; ++j) v[1 + order.p + j] = beta[static_cast<std::size_t>(j)];
    return v;
}

void ParameterVector::validate() const {
    order.validate();
    if (alpha.size() != static_cast<std::size_t>(order.p) ||
        beta.size() != static_cast<std::size_t>(order.q)) {
        throw InvalidArgumentError("alpha/beta length does not match the order");
    }
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw InvalidArgumentError("omega must be positive and finite");
    }
    for (double a : alpha) {
        if (!(a >= 0.0) || !std::isfinite(a)) {
            throw InvalidArgumentError("alpha coordinates must be >= 0 and finite");
        }
    }
    double bs = 0.0;
    for (double b : beta) {
        if (!(b > 0.0 && b < 1.0)) {
            throw InvalidArgumentError("beta coordinates must lie in (0,1)");
        }
        bs += b;
    }
    if (!(bs < 1.0)) throw InvalidArgumentError("sum of beta must be < 1");
}

double ParameterVector::beta_sum() const {
    double s = 0.0;
    for (double b : beta) s += b;
    return s;
}

double ParameterVector::c0() const { return omega / (1.0 - beta_sum()); }

std::string ParameterVector::describe() const {
    std::ostringstream os;
    os << "(" << omega;
    for (double a : alpha) os << ", " << a;
    for (double b : beta) os << ", " << b;
    os << ")";
    return os.str();
}

void SeriesData::validate() const {
    if (x.empty()) throw DataError("series is empty");
    for (double v : x) {
        if (!std::isfinite(v)) throw DataError("series contains a non-finite value");
    }
}

std::vector<double> coefficients(const ParameterVector& theta, std::size_t count) {
    theta.validate();
    const int p = theta.order.p, q = theta.order.q;
    std::vector<double> c(count + 1, 0.0);
    c[0] = theta.c0();
    for (std::size_t j = 1; j <= count; ++j) {
        double cj = (j <= static_cast<std::size_t>(p)) ? theta.alpha[j - 1] : 0.0;
        for (int i = 1; i <= q && static_cast<std::size_t>(i) < j; ++i) {
            cj += theta.beta[static_cast<std::size_t>(i - 1)] * c[j - static_cast<std::size_t>(i)];
        }
        c[j] = cj;
    }
    return c;
}

Eigen::MatrixXd coefficient_gradients(const ParameterVector& theta, std::size_t count) {
    theta.validate();
    const int p = theta.order.p, q = theta.order.q;
    const int k = theta.order.dim();
    const double denom = 1.0 - theta.beta_sum();
    const std::vector<double> c = coefficients(theta, count);

    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(count) + 1, k);
    g(0, 0) = 1.0 / denom;
    for (int m = 0; m < q; ++m) g(0, 1 + p + m) = theta.omega / (denom * denom);

    for (std::size_t j = 1; j <= count; ++j) {
        const auto row = static_cast<Eigen::Index>(j);
        if (j <= static_cast<std::size_t>(p)) g(row, static_cast<Eigen::Index>(j)) = 1.0;
        for (int m = 0; m < q; ++m) {
            if (j > static_cast<std::size_t>(m + 1)) {
                g(row, 1 + p + m) += c[j - static_cast<std::size_t>(m + 1)];
            }
        }
        for (int i = 1; i <= q && static_cast<std::size_t>(i) < j; ++i) {
            g.row(row) += theta.beta[static_cast<std::size_t>(i - 1)] *
                          g.row(row - static_cast<Eigen::Index>(i));
        }
    }
    return g;
}

namespace {

// The filter is evaluated as v_t = c_0 + s_t with s_1 = 0 and
//   s_t = sum_i alpha_i X_{t-i}^2 [t-i >= 1] + sum_j beta_j s_{t-j} [t-j >= 2],
// which reproduces the coefficient sum exactly and keeps v_t >= c_0 as long
// as all c_j >= 0. Writing v = c_0 + s (instead of recursing on v itself)
// makes the lower bound hold in floating point as well.
void filter_core(const ParameterVector& theta, const std::vector<double>& x,
                 std::vector<double>& s) {
    const int p = theta.order.p, q = theta.order.q;
    const std::size_t n = x.size();
    s.assign(n, 0.0);
    for (std::size_t t = 1; t < n; ++t) {  // t is 0-based; observation index t+1
        double st = 0.0;
        for (int i = 1; i <= p; ++i) {
            if (t >= static_cast<std::size_t>(i)) {
                const double xi = x[t - static_cast<std::size_t>(i)];
                st += theta.alpha[static_cast<std::size_t>(i - 1)] * xi * xi;
            }
        }
        for (int j = 1; j <= q; ++j) {
            if (t >= static_cast<std::size_t>(j) + 1) {
                st += theta.beta[static_cast<std::size_t>(j - 1)] *
                      s[t - static_cast<std::size_t>(j)];
            }
        }
        s[t] = st;
    }
}

}  // namespace

namespace detail {

void filter_values_unchecked(const ParameterVector& theta, const std::vector<double>& x,
                             std::vector<double>& v_out) {
    const double c0 = theta.c0();
    filter_core(theta, x, v_out);
    for (double& v : v_out) v += c0;
}

VarianceFilterOutput filter_unchecked(const ParameterVector& theta,
                                      const std::vector<double>& x) {
    const int p = theta.order.p, q = theta.order.q;
    const int k = theta.order.dim();
    const std::size_t n = x.size();
    const double denom = 1.0 - theta.beta_sum();
    const double c0 = theta.c0();

    VarianceFilterOutput out;
    std::vector<double> s;
    filter_core(theta, x, s);
    out.v.resize(n);
    for (std::size_t t = 0; t < n; ++t) out.v[t] = c0 + s[t];

    // gradient of c_0 is constant in t; the s-part follows the recursion
    out.grad.resize(static_cast<Eigen::Index>(n), k);
    Eigen::RowVectorXd g0 = Eigen::RowVectorXd::Zero(k);
    g0(0) = 1.0 / denom;
    for (int m = 0; m < q; ++m) g0(1 + p + m) = c0 / denom;
    Eigen::MatrixXd ds = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), k);
    for (std::size_t t = 1; t < n; ++t) {
        const auto row = static_cast<Eigen::Index>(t);
        for (int i = 1; i <= p; ++i) {
            if (t >= static_cast<std::size_t>(i)) {
                const double xi = x[t - static_cast<std::size_t>(i)];
                ds(row, i) += xi * xi;
            }
        }
        for (int j = 1; j <= q; ++j) {
            if (t >= static_cast<std::size_t>(j) + 1) {
                const auto lag = row - static_cast<Eigen::Index>(j);
                ds(row, 1 + p + j - 1) += s[t - static_cast<std::size_t>(j)];
                ds.row(row) += theta.beta[static_cast<std::size_t>(j - 1)] * ds.row(lag);
            }
        }
    }
    for (std::size_t t = 0; t < n; ++t) {
        out.grad.row(static_cast<Eigen::Index>(t)) = g0 + ds.row(static_cast<Eigen::Index>(t));
    }
    return out;
}

}  // namespace detail

VarianceFilterOutput variance_filter(const ParameterVector& theta, const SeriesData& data) {
    theta.validate();
    data.validate();
    return detail::filter_unchecked(theta, data.x);
}

SeriesData simulate_path(const ParameterVector& theta, const ErrorDistribution& dist,
                         std::size_t n, std::size_t burn_in, std::uint64_t seed) {
    dist.validate();
    const double m2 = dist.second_moment();
    if (!std::isfinite(m2)) {
        throw NonStationaryError("innovation distribution " + dist.label() +
                                 " has no finite second moment");
    }
    Rng rng(seed);
    auto path = simulate_path_with(theta, n, burn_in, m2, [&] { return dist.sample(rng); });
    path.meta = "simulated " + dist.label();
    return path;
}

ParameterVector scale_by_ch(const ParameterVector& theta, double ch) {
    if (!(ch > 0.0) || !std::isfinite(ch)) {
        throw InvalidArgumentError("scale_by_ch: c_H must be positive and finite");
    }
    ParameterVector out = theta;
    out.omega *= ch;
    for (double& a : out.alpha) a *= ch;
    out.validate();
    return out;
}

ParameterVector embed(const ParameterVector& theta, GarchOrder target) {
    target.validate();
    if (target.p < theta.order.p || target.q < theta.order.q) {
        throw InvalidArgumentError("embed: target order must dominate componentwise");
    }
    ParameterVector out;
    out.order = target;
    out.omega = theta.omega;
    out.alpha = theta.alpha;
    out.alpha.resize(static_cast<std::size_t>(target.p), 0.0);
    out.beta = theta.beta;
    out.beta.resize(static_cast<std::size_t>(target.q), 0.0);
    return out;
}

}  // namespace garchm
