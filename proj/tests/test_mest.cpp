#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "core/bootstrap.hpp"
#include "core/errors.hpp"
#include "core/inference.hpp"
#include "core/mest.hpp"

using namespace garchm;

namespace {

ParameterVector make_theta(GarchOrder order, std::initializer_list<double> values) {
    Eigen::VectorXd v(order.dim());
    int i = 0;
    for (double x : values) v[i++] = x;
    return ParameterVector::from_vector(order, v);
}

// Series with X_t^2 = v_hat_t(theta) for every t, built forward through the
// filter; an exact root of the QMLE estimating equation.
SeriesData exact_root_series(const ParameterVector& theta, std::size_t n) {
    SeriesData data;
    data.x.reserve(n);
    std::vector<double> v;
    for (std::size_t t = 0; t < n; ++t) {
        data.x.push_back(0.0);
        detail::filter_values_unchecked(theta, data.x, v);
        data.x.back() = std::sqrt(v[t]);
    }
    return data;
}

inline ParameterVector sse_theta() { return make_theta({1, 1}, {1.65e-5, 0.0701, 0.901}); }

}  // namespace

TEST_CASE("estimating function vanishes on an exact-root series (QMLE)") {
    const auto theta = make_theta({1, 1}, {0.5, 0.1, 0.6});
    const auto data = exact_root_series(theta, 200);
    const Eigen::VectorXd m = estimating_function(theta, data, ScoreFunction::qmle());
    // residual rounding only: each summand is 1 - (sqrt(v))^2 / v
    for (Eigen::Index j = 0; j < m.size(); ++j) {
        CHECK(std::abs(m[j]) < 1e-10 * 200);
    }
    CHECK(scaled_residual(m, [&] {
              MestWorkspace ws;
              ws.build(theta, data, ScoreFunction::qmle());
              Eigen::VectorXd mm;
              Eigen::MatrixXd gram;
              ws.reduce(nullptr, mm, gram);
              return gram;
          }(), data.n()) < 1e-12);
}

TEST_CASE("estimating function at n = 1 equals the single-term closed form") {
    const auto theta = make_theta({1, 1}, {0.8, 0.12, 0.55});
    const SeriesData data{{0.9}, ""};
    const auto score = ScoreFunction::lad();
    const Eigen::VectorXd m = estimating_function(theta, data, score);

    const double c0 = 0.8 / (1.0 - 0.55);
    const double term = 1.0 - score.h(0.9 / std::sqrt(c0));
    // grad c_0 = (1/(1-beta), 0, omega/(1-beta)^2)
    CHECK(m[0] == doctest::Approx(term / (1.0 - 0.55) / c0).epsilon(1e-12));
    CHECK(m[1] == doctest::Approx(0.0));
    CHECK(m[2] == doctest::Approx(term * 0.8 / ((1.0 - 0.55) * (1.0 - 0.55)) / c0)
                      .epsilon(1e-12));
}

TEST_CASE("estimating function equals the weighted version with unit weights, bitwise") {
    const auto theta = sse_theta();
    const auto data = simulate_path(theta, ErrorDistribution::normal(), 400, 300, 31);
    for (const auto& score : {ScoreFunction::qmle(), ScoreFunction::mu(3.0)}) {
        const Eigen::VectorXd a = estimating_function(theta, data, score);
        const std::vector<double> ones(data.n(), 1.0);
        const Eigen::VectorXd b = weighted_estimating_function(theta, data, score, ones);
        for (Eigen::Index j = 0; j < a.size(); ++j) CHECK(a[j] == b[j]);
    }
}

TEST_CASE("weighted estimating function is linear in the weights") {
    const auto theta = sse_theta();
    const auto data = simulate_path(theta, ErrorDistribution::normal(), 300, 300, 32);
    const auto score = ScoreFunction::huber(1.5);
    const std::vector<double> twos(data.n(), 2.0);
    const Eigen::VectorXd doubled = weighted_estimating_function(theta, data, score, twos);
    const Eigen::VectorXd base = estimating_function(theta, data, score);
    for (Eigen::Index j = 0; j < base.size(); ++j) {
        CHECK(doubled[j] == doctest::Approx(2.0 * base[j]).epsilon(1e-14));
    }

    // indicator weight picks out one scaled summand
    std::vector<double> ind(data.n(), 0.0);
    ind[0] = static_cast<double>(data.n());
    const Eigen::VectorXd single = weighted_estimating_function(theta, data, score, ind);
    const SeriesData first{{data.x[0]}, ""};
    const Eigen::VectorXd hand = estimating_function(theta, first, score);
    for (Eigen::Index j = 0; j < hand.size(); ++j) {
        CHECK(single[j] ==
              doctest::Approx(static_cast<double>(data.n()) * hand[j]).epsilon(1e-12));
    }
}

TEST_CASE("irls_step is a fixed point at an exact root") {
    const auto theta = make_theta({1, 1}, {0.5, 0.1, 0.6});
    const auto data = exact_root_series(theta, 300);
    FitConfig config;
    config.score = ScoreFunction::qmle();
    const auto next = irls_step(theta, data, config);
    CHECK(next.omega == doctest::Approx(theta.omega).epsilon(1e-9));
    CHECK(next.alpha[0] == doctest::Approx(theta.alpha[0]).epsilon(1e-9));
    CHECK(next.beta[0] == doctest::Approx(theta.beta[0]).epsilon(1e-9));
}

TEST_CASE("QMLE step with unit alpha_dot/2 is the BHHH update") {
    const auto theta = sse_theta();
    const auto data = simulate_path(theta, ErrorDistribution::normal(), 500, 300, 33);
    FitConfig config;
    config.score = ScoreFunction::qmle();
    config.alpha_dot = 2.0;  // alpha_dot/2 = E(eps^2) = 1

    // hand-built W_t = 1/v^2, x_t = grad v, y_t = X^2 - v
    const auto f = variance_filter(theta, data);
    const int k = theta.order.dim();
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(k, k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
    for (std::size_t t = 0; t < data.n(); ++t) {
        const auto row = static_cast<Eigen::Index>(t);
        const double v = f.v[t];
        const double w = 1.0 / (v * v);
        const Eigen::VectorXd x = f.grad.row(row).transpose();
        const double y = data.x[t] * data.x[t] - v;
        gram.noalias() += w * x * x.transpose();
        rhs.noalias() += (w * y) * x;
    }
    const Eigen::VectorXd expected = theta.to_vector() + gram.ldlt().solve(rhs);

    const auto stepped = irls_step(theta, data, config);
    const Eigen::VectorXd got = stepped.to_vector();
    for (int j = 0; j < k; ++j) {
        CHECK(got[j] == doctest::Approx(expected[j]).epsilon(1e-8));
    }
}

TEST_CASE("one step from a 1% perturbation contracts toward the full fit") {
    const auto data = simulate_path(sse_theta(), ErrorDistribution::normal(), 5000, 500, 34);
    FitConfig config;
    config.score = ScoreFunction::qmle();
    const FitResult full = fit(data, {1, 1}, config);
    REQUIRE(full.converged);
    const Eigen::VectorXd target = full.theta_hat.to_vector();

    Eigen::VectorXd start = sse_theta().to_vector() * 1.01;
    const auto stepped =
        irls_step(ParameterVector::from_vector({1, 1}, start), data, config);
    const Eigen::VectorXd after = stepped.to_vector();

    double before_d = 0.0, after_d = 0.0;
    for (int j = 0; j < 3; ++j) {
        before_d += std::pow((start[j] - target[j]) / target[j], 2);
        after_d += std::pow((after[j] - target[j]) / target[j], 2);
    }
    CHECK(after_d < before_d);
}

TEST_CASE("QMLE fit recovers the DGP within three plug-in standard errors") {
    const auto data = simulate_path(sse_theta(), ErrorDistribution::normal(), 5000, 500, 35);
    FitConfig config;
    config.score = ScoreFunction::qmle();
    const FitResult res = fit(data, {1, 1}, config);
    REQUIRE(res.converged);
    CHECK(res.m_norm <= 1e-6);

    const auto cov = estimate_covariance(data, res, config.score);
    const Eigen::VectorXd got = res.theta_hat.to_vector();
    const Eigen::VectorXd truth = sse_theta().to_vector();
    for (int j = 0; j < 3; ++j) {
        const double se = std::sqrt(cov.cov(j, j) / static_cast<double>(data.n()));
        CHECK(std::abs(got[j] - truth[j]) < 3.0 * se);
    }
}

TEST_CASE("LAD fit estimates (c_H omega, c_H alpha, beta) with c_H = 2/pi") {
    const auto data = simulate_path(sse_theta(), ErrorDistribution::normal(), 5000, 500, 36);
    FitConfig config;
    config.score = ScoreFunction::lad();
    const FitResult res = fit(data, {1, 1}, config);
    REQUIRE(res.converged);

    const auto target = scale_by_ch(sse_theta(), 2.0 / 3.14159265358979323846);
    const auto cov = estimate_covariance(data, res, config.score);
    const Eigen::VectorXd got = res.theta_hat.to_vector();
    const Eigen::VectorXd truth = target.to_vector();
    for (int j = 0; j < 3; ++j) {
        const double se = std::sqrt(cov.cov(j, j) / static_cast<double>(data.n()));
        CHECK(std::abs(got[j] - truth[j]) < 3.0 * se);
    }
}

TEST_CASE("scale equivariance: fit(s X) = (s^2 omega, alpha, beta)") {
    const auto data = simulate_path(sse_theta(), ErrorDistribution::normal(), 2000, 500, 37);
    FitConfig config;
    config.score = ScoreFunction::qmle();
    const FitResult base = fit(data, {1, 1}, config);
    REQUIRE(base.converged);

    for (double s : {0.1, 10.0, 2.0}) {
        SeriesData scaled = data;
        for (auto& x : scaled.x) x *= s;
        const FitResult res = fit(scaled, {1, 1}, config);
        REQUIRE(res.converged);
        CHECK(res.theta_hat.omega / (s * s * base.theta_hat.omega) ==
              doctest::Approx(1.0).epsilon(1e-6));
        CHECK(std::abs(res.theta_hat.alpha[0] - base.theta_hat.alpha[0]) < 1e-6);
        CHECK(std::abs(res.theta_hat.beta[0] - base.theta_hat.beta[0]) < 1e-6);
    }
}

TEST_CASE("the converged estimate does not depend on alpha_dot") {
    const auto data = simulate_path(sse_theta(), ErrorDistribution::normal(), 1500, 500, 38);
    const double a = default_alpha_dot(ScoreFunction::huber(1.5));
    Eigen::MatrixXd results(3, 3);
    int row = 0;
    for (double factor : {0.5, 1.0, 2.0}) {
        FitConfig config;
        config.score = ScoreFunction::huber(1.5);
        config.alpha_dot = factor * a;
        const FitResult res = fit(data, {1, 1}, config);
        REQUIRE(res.converged);
        results.row(row++) = res.theta_hat.to_vector().transpose();
    }
    for (int j = 0; j < 3; ++j) {
        CHECK(std::abs(results(0, j) - results(1, j)) < 1e-6);
        CHECK(std::abs(results(2, j) - results(1, j)) < 1e-6);
    }
}

TEST_CASE("mean of H(residual) is near one at the fitted point") {
    const auto data = simulate_path(sse_theta(), ErrorDistribution::normal(), 4000, 500, 39);
    for (const auto& score : {ScoreFunction::qmle(), ScoreFunction::lad(),
                              ScoreFunction::cauchy()}) {
        FitConfig config;
        config.score = score;
        const FitResult res = fit(data, {1, 1}, config);
        REQUIRE(res.converged);
        double acc = 0.0;
        for (double r : res.residuals) acc += score.h(r);
        const double mean_h = acc / static_cast<double>(res.residuals.size());
        CHECK(std::abs(mean_h - 1.0) < 3.0 / std::sqrt(static_cast<double>(data.n())));
    }
}

TEST_CASE("non-convergence is reported, not thrown") {
    const auto data = simulate_path(sse_theta(), ErrorDistribution::normal(), 1000, 500, 40);
    FitConfig config;
    config.score = ScoreFunction::qmle();
    config.max_iter = 1;
    const FitResult res = fit(data, {1, 1}, config);
    CHECK(!res.converged);
    CHECK(res.iterations == 1);
    CHECK(res.residuals.size() == data.n());
    CHECK(res.trace.size() == 1);
}

TEST_CASE("degenerate data produces a typed singular-Gram error") {
    SeriesData flat;
    flat.x.assign(64, 0.0);
    FitConfig config;
    config.score = ScoreFunction::qmle();
    CHECK_THROWS_AS(fit(flat, {1, 1}, config), SingularMatrixError);
}

TEST_CASE("fit rejects series that are too short") {
    SeriesData tiny;
    tiny.x.assign(25, 0.01);
    FitConfig config;
    config.score = ScoreFunction::qmle();
    CHECK_THROWS_AS(fit(tiny, {1, 1}, config), DataError);
}
