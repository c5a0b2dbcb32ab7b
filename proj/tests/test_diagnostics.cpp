#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "core/diagnostics.hpp"
#include "core/special.hpp"

using namespace garchm;

namespace {

ParameterVector make_theta(GarchOrder order, std::initializer_list<double> values) {
    Eigen::VectorXd v(order.dim());
    int i = 0;
    for (double x : values) v[i++] = x;
    return ParameterVector::from_vector(order, v);
}

FitResult fake_fit(const ParameterVector& theta, std::size_t n) {
    FitResult res;
    res.theta_hat = theta;
    res.converged = true;
    res.residuals.assign(n, 0.0);
    return res;
}

}  // namespace

TEST_CASE("normalized volatility: hand examples") {
    // constant filter: alpha = 0 embeds a flat (1,1) model
    ParameterVector flat;
    flat.order = {1, 1};
    flat.omega = 1.0;
    flat.alpha = {0.0};
    flat.beta = {0.5};
    SeriesData data{{0.3, -0.1, 0.2}, ""};
    const auto u = normalized_volatility(fake_fit(flat, 3), data);
    for (double v : u.u) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    // v = (1, 3) -> u = (0.25, 0.75): one-step (1,1) filter with x_1^2 = 2/alpha... use
    // the direct ratio instead: c_0 = 1, v_2 = 1 + 1*x^2 with x = sqrt(2) gives (1,3)
    ParameterVector simple;
    simple.order = {1, 1};
    simple.omega = 0.5;
    simple.alpha = {1.0};
    simple.beta = {0.5};
    SeriesData two{{std::sqrt(2.0), 0.0}, ""};
    const auto u2 = normalized_volatility(fake_fit(simple, 2), two);
    CHECK(u2.u[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(u2.u[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("normalized volatility sums to one and cancels the c_H scale") {
    const auto theta = make_theta({1, 1}, {1.65e-5, 0.0701, 0.901});
    const auto data = simulate_path(theta, ErrorDistribution::normal(), 800, 500, 81);
    const auto fit_a = fake_fit(theta, data.n());
    const auto u = normalized_volatility(fit_a, data);

    double total = std::accumulate(u.u.begin(), u.u.end(), 0.0);
    CHECK(std::abs(total - 1.0) < 1e-12);
    for (double v : u.u) CHECK(v > 0.0);

    for (double c : {0.3, 2.5}) {
        const auto fit_b = fake_fit(scale_by_ch(theta, c), data.n());
        const auto w = normalized_volatility(fit_b, data);
        for (std::size_t t = 0; t < data.n(); ++t) {
            CHECK(std::abs(w.u[t] - u.u[t]) < 1e-12);
        }
    }
}

TEST_CASE("volatility paths from different scores nearly overlap") {
    const auto theta = make_theta({1, 1}, {1.65e-5, 0.0701, 0.901});
    const auto data = simulate_path(theta, ErrorDistribution::normal(), 1200, 500, 82);
    FitConfig qmle;
    qmle.score = ScoreFunction::qmle();
    FitConfig lad;
    lad.score = ScoreFunction::lad();
    const auto fa = fit(data, {1, 1}, qmle);
    const auto fb = fit(data, {1, 1}, lad);
    REQUIRE(fa.converged);
    REQUIRE(fb.converged);
    const auto ua = normalized_volatility(fa, data);
    const auto ub = normalized_volatility(fb, data);
    double sup = 0.0, umax = 0.0;
    for (std::size_t t = 0; t < data.n(); ++t) {
        sup = std::max(sup, std::abs(ua.u[t] - ub.u[t]));
        umax = std::max(umax, ua.u[t]);
    }
    CHECK(sup < 0.1 * umax);
}

TEST_CASE("qq_against_t: median plotting position maps to zero") {
    std::vector<double> odd{0.3, -1.2, 0.5, 2.0, -0.7};  // n = 5, middle position 0.5
    const auto qq = qq_against_t(odd, 4.01);
    CHECK(qq.reference_quantiles[2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::is_sorted(qq.sorted_residuals.begin(), qq.sorted_residuals.end()));
    CHECK(std::is_sorted(qq.reference_quantiles.begin(), qq.reference_quantiles.end()));
}

TEST_CASE("qq_against_t is permutation-invariant") {
    std::mt19937 gen(83);
    std::vector<double> r(200);
    for (auto& x : r) x = std::normal_distribution<double>()(gen);
    auto shuffled = r;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    const auto a = qq_against_t(r, 5.0);
    const auto b = qq_against_t(shuffled, 5.0);
    CHECK(a.sorted_residuals == b.sorted_residuals);
    CHECK(a.reference_quantiles == b.reference_quantiles);
    CHECK(a.tail_slope == b.tail_slope);
}

TEST_CASE("t(5) sample against t(5) reference stays within the 99% Kolmogorov band") {
    const std::size_t n = 10000;
    Rng rng(84);
    const auto dist = ErrorDistribution::student_t(5.0, false);
    std::vector<double> sample(n);
    for (auto& x : sample) x = dist.sample(rng);
    const auto qq = qq_against_t(sample, 5.0);
    // distance in probability space: |F(x_(i)) - p_i| <= K_0.01 / sqrt(n)
    const double band = 1.628 / std::sqrt(static_cast<double>(n));
    for (std::size_t i = 0; i < n; i += 13) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        const double f = student_t_cdf(qq.sorted_residuals[i], 5.0);
        CHECK(std::abs(f - p) <= band);
    }
    CHECK(std::abs(qq.tail_slope) < 0.1);
}

TEST_CASE("t(2.2) sample against t(12.01) reference flags a heavier tail") {
    const std::size_t n = 10000;
    Rng rng(85);
    const auto dist = ErrorDistribution::student_t(2.2, false);
    std::vector<double> sample(n);
    for (auto& x : sample) x = dist.sample(rng);
    const auto qq = qq_against_t(sample, 12.01);
    CHECK(qq.tail_slope > 0.25);
    // upper-decile points sit above the diagonal
    std::size_t above = 0, count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        if (p <= 0.95) continue;
        ++count;
        if (qq.sorted_residuals[i] > qq.reference_quantiles[i]) ++above;
    }
    CHECK(above > count * 9 / 10);

    // and the reverse comparison flags a lighter tail
    Rng rng2(86);
    const auto light = ErrorDistribution::normal();
    for (auto& x : sample) x = light.sample(rng2);
    const auto qq2 = qq_against_t(sample, 2.2);
    CHECK(qq2.tail_slope < -0.2);
}

TEST_CASE("diagnostics input validation") {
    CHECK_THROWS_AS(qq_against_t({}, 3.0), InvalidArgumentError);
    CHECK_THROWS_AS(qq_against_t({1.0, 2.0}, 0.0), InvalidArgumentError);
    const auto theta = make_theta({1, 1}, {0.1, 0.1, 0.8});
    FitResult bad = fake_fit(theta, 2);
    bad.converged = false;
    SeriesData data{{0.1, 0.2}, ""};
    CHECK_THROWS_AS(normalized_volatility(bad, data), InvalidArgumentError);
}
