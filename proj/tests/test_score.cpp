#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "core/errors.hpp"
#include "core/score.hpp"

using namespace garchm;

namespace {
const double kPi = 3.14159265358979323846;

std::vector<ScoreFunction> all_scores() {
    return {ScoreFunction::qmle(), ScoreFunction::lad(), ScoreFunction::huber(1.5),
            ScoreFunction::mu(3.0), ScoreFunction::cauchy()};
}
}  // namespace

TEST_CASE("H evaluates the closed forms") {
    CHECK(ScoreFunction::qmle().h(2.0) == doctest::Approx(4.0));
    CHECK(ScoreFunction::huber(1.5).h(2.0) == doctest::Approx(3.0));
    CHECK(ScoreFunction::huber(1.5).h(1.0) == doctest::Approx(1.0));  // inner branch
    CHECK(ScoreFunction::mu(3.0).h(1.0) == doctest::Approx(1.5));
    CHECK(ScoreFunction::cauchy().h(1.0) == doctest::Approx(1.0));
    CHECK(ScoreFunction::lad().h(-2.5) == doctest::Approx(2.5));
}

TEST_CASE("H_dot evaluates the closed forms and conventions") {
    CHECK(ScoreFunction::qmle().h_dot(3.0) == doctest::Approx(6.0));
    CHECK(ScoreFunction::lad().h_dot(-2.0) == doctest::Approx(-1.0));
    CHECK(ScoreFunction::cauchy().h_dot(1.0) == doctest::Approx(1.0));
    // conventions at the non-differentiable sets
    CHECK(ScoreFunction::lad().h_dot(0.0) == 0.0);
    CHECK(ScoreFunction::mu(3.0).h_dot(0.0) == 0.0);
    CHECK(ScoreFunction::huber(1.5).h_dot(1.5) == doctest::Approx(3.0));  // inner branch
}

TEST_CASE("H(x) = x psi(x) at random points") {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> ux(-8.0, 8.0);
    for (const auto& score : all_scores()) {
        for (int i = 0; i < 10000; ++i) {
            const double x = ux(gen);
            CHECK(std::abs(score.h(x) - x * score.psi(x)) < 1e-12);
        }
    }
}

TEST_CASE("H is symmetric, psi is odd, H(0) = 0") {
    std::mt19937 gen(12);
    std::uniform_real_distribution<double> ux(0.0, 10.0);
    for (const auto& score : all_scores()) {
        CHECK(score.h(0.0) == 0.0);
        for (int i = 0; i < 1000; ++i) {
            const double x = ux(gen);
            CHECK(score.h(x) == doctest::Approx(score.h(-x)).epsilon(1e-15));
            CHECK(score.psi(x) == doctest::Approx(-score.psi(-x)).epsilon(1e-15));
        }
    }
}

TEST_CASE("bounded kinds approach their supremum") {
    CHECK(ScoreFunction::mu(3.0).h_sup() == doctest::Approx(3.0));
    CHECK(ScoreFunction::cauchy().h_sup() == doctest::Approx(2.0));
    CHECK(ScoreFunction::mu(3.0).h(1e9) == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(ScoreFunction::cauchy().h(1e9) == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(!ScoreFunction::qmle().bounded());
    CHECK(ScoreFunction::mu(3.0).bounded());
}

TEST_CASE("tuning constraints are enforced") {
    CHECK_THROWS_AS(ScoreFunction::huber(0.0), InvalidArgumentError);
    CHECK_THROWS_AS(ScoreFunction::mu(1.0), InvalidArgumentError);
    CHECK_NOTHROW(ScoreFunction::mu(1.0001));
}

TEST_CASE("H_dot agrees with central finite differences away from kinks") {
    std::mt19937 gen(13);
    std::uniform_real_distribution<double> ux(-6.0, 6.0);
    const double h = 1e-6;
    for (const auto& score : all_scores()) {
        int checked = 0;
        for (int i = 0; checked < 300 && i < 10000; ++i) {
            const double x = ux(gen);
            if (std::abs(x) < 1e-3) continue;
            if (score.kind == ScoreKind::Huber && std::abs(std::abs(x) - score.tuning) < 1e-3)
                continue;
            const double fd = (score.h(x + h) - score.h(x - h)) / (2.0 * h);
            const double exact = score.h_dot(x);
            const double denom = std::max(std::abs(exact), 1e-8);
            CHECK(std::abs(fd - exact) / denom < 1e-6);
            ++checked;
        }
        CHECK(checked == 300);
    }
}

TEST_CASE("c_H closed forms for QMLE and LAD") {
    CHECK(solve_ch_quadrature(ScoreFunction::qmle(), ErrorDistribution::normal()) ==
          doctest::Approx(1.0));
    CHECK(solve_ch_quadrature(ScoreFunction::lad(), ErrorDistribution::normal()) ==
          doctest::Approx(2.0 / kPi).epsilon(1e-12));
    // Monte Carlo path short-circuits to the same closed forms
    CHECK(solve_ch_mc(ScoreFunction::lad(), ErrorDistribution::normal(), 100000, 1) ==
          doctest::Approx(2.0 / kPi).epsilon(1e-12));
    CHECK(solve_ch_quadrature(ScoreFunction::qmle(),
                              ErrorDistribution::double_exponential(false)) ==
          doctest::Approx(2.0));
    CHECK(solve_ch_quadrature(ScoreFunction::lad(),
                              ErrorDistribution::double_exponential(true)) ==
          doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("c_H for Huber and Cauchy under the standard normal") {
    // Table-1 cells with the spec's tolerances
    const double huber = solve_ch_quadrature(ScoreFunction::huber(1.5),
                                             ErrorDistribution::normal());
    CHECK(std::abs(huber - 0.825) < 0.01);
    const double cauchy = solve_ch_quadrature(ScoreFunction::cauchy(),
                                              ErrorDistribution::normal());
    CHECK(std::abs(cauchy - 0.377) < 0.005);
    // Monte Carlo agrees with quadrature at I = 1e6
    const double huber_mc =
        solve_ch_mc(ScoreFunction::huber(1.5), ErrorDistribution::normal(), 1000000, 99);
    CHECK(huber_mc == doctest::Approx(huber).epsilon(5e-3));
}

TEST_CASE("c_H fails with a typed error when no root exists") {
    // QMLE under raw t(1.8): no finite second moment
    CHECK_THROWS_AS(solve_ch_quadrature(ScoreFunction::qmle(),
                                        ErrorDistribution::student_t(1.8, false)),
                    NoRootError);
    // LAD under t(0.9): no finite first absolute moment
    CHECK_THROWS_AS(solve_ch_quadrature(ScoreFunction::lad(),
                                        ErrorDistribution::student_t(0.9, false)),
                    NoRootError);
}

TEST_CASE("Monte Carlo c_H objective is non-increasing in c and bisection is tight") {
    const auto score = ScoreFunction::mu(3.0);
    const auto dist = ErrorDistribution::normal();
    Rng rng(77);
    std::vector<double> eps(200000);
    for (auto& e : eps) e = dist.sample(rng);
    auto objective = [&](double c) {
        double acc = 0.0;
        for (double e : eps) acc += score.h(e / std::sqrt(c));
        return acc / static_cast<double>(eps.size()) - 1.0;
    };
    double prev = objective(0.01);
    for (double c : {0.1, 0.5, 1.0, 2.0, 10.0, 100.0}) {
        const double cur = objective(c);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
    const double root = solve_ch_mc(score, dist, 200000, 77);
    CHECK(std::abs(objective(root)) < 1e-4);  // slope ~O(1) near the root, c within 1e-6
}

TEST_CASE("solve_ch_mc is bit-reproducible for a fixed seed") {
    const double a =
        solve_ch_mc(ScoreFunction::cauchy(), ErrorDistribution::logistic(true), 100000, 5);
    const double b =
        solve_ch_mc(ScoreFunction::cauchy(), ErrorDistribution::logistic(true), 100000, 5);
    CHECK(a == b);
}

TEST_CASE("alpha_dot closed forms and quadrature under the standard normal proxy") {
    const auto normal = ErrorDistribution::normal();
    CHECK(alpha_dot_quadrature(ScoreFunction::qmle(), normal) == doctest::Approx(2.0));
    CHECK(alpha_dot_quadrature(ScoreFunction::lad(), normal) ==
          doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-12));
    CHECK(alpha_dot_quadrature(ScoreFunction::huber(1.5), normal) ==
          doctest::Approx(1.3442184079).epsilon(1e-6));
    CHECK(alpha_dot_quadrature(ScoreFunction::mu(3.0), normal) ==
          doctest::Approx(0.6063463176).epsilon(1e-6));
    CHECK(alpha_dot_quadrature(ScoreFunction::cauchy(), normal) ==
          doctest::Approx(0.6227181697).epsilon(1e-6));
}

TEST_CASE("alpha_dot Monte Carlo agrees with quadrature") {
    const auto normal = ErrorDistribution::normal();
    for (const auto& score : all_scores()) {
        const double quad = alpha_dot_quadrature(score, normal);
        const double mc = alpha_dot_mc(score, normal, 400000, 3);
        CHECK(mc == doctest::Approx(quad).epsilon(0.02));
    }
}

TEST_CASE("standardized distributions sample to unit variance") {
    struct Case {
        ErrorDistribution dist;
        double tol;
    };
    const Case cases[] = {
        {ErrorDistribution::normal(), 0.01},
        {ErrorDistribution::double_exponential(true), 0.02},
        {ErrorDistribution::logistic(true), 0.02},
        {ErrorDistribution::student_t(5.0, true), 0.05},
        {ErrorDistribution::student_t(3.0, true), 0.35},  // heavy tail, slow convergence
    };
    for (const auto& c : cases) {
        Rng rng(123);
        double acc = 0.0;
        const int n = 400000;
        for (int i = 0; i < n; ++i) {
            const double x = c.dist.sample(rng);
            acc += x * x;
        }
        CHECK(acc / n == doctest::Approx(1.0).epsilon(c.tol));
    }
}

TEST_CASE("student t permits non-integer degrees of freedom") {
    const auto d = ErrorDistribution::student_t(2.2, true);
    CHECK_NOTHROW(d.validate());
    CHECK(d.second_moment() == doctest::Approx(1.0));
    CHECK_THROWS_AS(ErrorDistribution::student_t(2.0, true).validate(),
                    InvalidArgumentError);
}
