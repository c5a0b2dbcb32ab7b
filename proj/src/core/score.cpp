#include "core/score.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "core/errors.hpp"
#include "core/special.hpp"

namespace garchm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection bracket and tolerance for c_H (spans every Table-1 value by
// orders of magnitude).
constexpr double kChLo = 1e-8;
constexpr double kChHi = 1e4;
constexpr double kChTol = 1e-6;
constexpr int kChMaxIter = 200;

double sign(double x) { return (x > 0.0) - (x < 0.0); }
}  // namespace

ScoreFunction ScoreFunction::huber(double k) {
    ScoreFunction s{ScoreKind::Huber, k};
    s.validate();
    return s;
}

ScoreFunction ScoreFunction::mu(double mu) {
    ScoreFunction s{ScoreKind::Mu, mu};
    s.validate();
    return s;
}

void ScoreFunction::validate() const {
    if (kind == ScoreKind::Huber && !(tuning > 0.0)) {
        throw InvalidArgumentError("Huber score requires tuning k > 0");
    }
    if (kind == ScoreKind::Mu && !(tuning > 1.0)) {
        throw InvalidArgumentError("mu score requires tuning mu > 1");
    }
}

double ScoreFunction::h(double x) const {
    const double ax = std::abs(x);
    switch (kind) {
        case ScoreKind::QMLE: return x * x;
        case ScoreKind::LAD: return ax;
        case ScoreKind::Huber: return ax <= tuning ? x * x : tuning * ax;
        case ScoreKind::Mu: return tuning * ax / (1.0 + ax);
        case ScoreKind::Cauchy: return 2.0 * x * x / (1.0 + x * x);
    }
    return 0.0;
}

double ScoreFunction::psi(double x) const {
    const double ax = std::abs(x);
    switch (kind) {
        case ScoreKind::QMLE: return x;
        case ScoreKind::LAD: return sign(x);
        case ScoreKind::Huber: return ax <= tuning ? x : tuning * sign(x);
        case ScoreKind::Mu: return tuning * sign(x) / (1.0 + ax);
        case ScoreKind::Cauchy: return 2.0 * x / (1.0 + x * x);
    }
    return 0.0;
}

double ScoreFunction::h_dot(double x) const {
    const double ax = std::abs(x);
    switch (kind) {
        case ScoreKind::QMLE: return 2.0 * x;
        case ScoreKind::LAD: return sign(x);
        case ScoreKind::Huber: return ax <= tuning ? 2.0 * x : tuning * sign(x);
        case ScoreKind::Mu: {
            const double d = 1.0 + ax;
            return tuning * sign(x) / (d * d);
        }
        case ScoreKind::Cauchy: {
            const double d = 1.0 + x * x;
            return 4.0 * x / (d * d);
        }
    }
    return 0.0;
}

double ScoreFunction::h_sup() const {
    switch (kind) {
        case ScoreKind::Mu: return tuning;
        case ScoreKind::Cauchy: return 2.0;
        default: return kInf;
    }
}

std::string ScoreFunction::name() const {
    switch (kind) {
        case ScoreKind::QMLE: return "qmle";
        case ScoreKind::LAD: return "lad";
        case ScoreKind::Huber: return "huber";
        case ScoreKind::Mu: return "mu";
        case ScoreKind::Cauchy: return "cauchy";
    }
    return "?";
}

ScoreFunction parse_score(const std::string& name, double tuning) {
    if (name == "qmle") return ScoreFunction::qmle();
    if (name == "lad") return ScoreFunction::lad();
    if (name == "huber") return ScoreFunction::huber(tuning > 0.0 ? tuning : 1.5);
    if (name == "mu") return ScoreFunction::mu(tuning > 0.0 ? tuning : 3.0);
    if (name == "cauchy") return ScoreFunction::cauchy();
    throw InvalidArgumentError("unknown score '" + name + "'");
}

namespace {

// E[g(eps)] by quadrature over the symmetric density; kinks listed so the
// adaptive rule splits there.
double expect_quadrature(const ErrorDistribution& dist,
                         const std::function<double(double)>& g,
                         const std::vector<double>& kinks) {
    auto f = [&](double x) { return g(x) * dist.pdf(x); };
    return 2.0 * integrate_half_line(f, 1e-11, kinks);
}

template <typename Objective>
double bisect_ch(Objective&& g, const std::string& what) {
    double lo = kChLo, hi = kChHi;
    double glo = g(lo), ghi = g(hi);
    if (!(glo > 0.0 && ghi < 0.0)) {
        throw NoRootError("c_H objective does not bracket a root on [1e-8,1e4] for " + what);
    }
    for (int it = 0; it < kChMaxIter && hi - lo > kChTol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::vector<double> sample_errors(const ErrorDistribution& dist, std::size_t samples,
                                  std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> eps(samples);
    for (auto& e : eps) e = dist.sample(rng);
    return eps;
}

bool closed_form_ch(const ScoreFunction& score, const ErrorDistribution& dist, double* out) {
    if (score.kind == ScoreKind::QMLE) {
        const double m2 = dist.second_moment();
        if (!std::isfinite(m2)) {
            throw NoRootError("QMLE c_H requires a finite second moment (" + dist.label() +
                              ")");
        }
        *out = m2;
        return true;
    }
    if (score.kind == ScoreKind::LAD) {
        const double m1 = dist.abs_mean();
        if (!std::isfinite(m1)) {
            throw NoRootError("LAD c_H requires a finite first absolute moment (" +
                              dist.label() + ")");
        }
        *out = m1 * m1;
        return true;
    }
    return false;
}

}  // namespace

double solve_ch_mc(const ScoreFunction& score, const ErrorDistribution& dist,
                   std::size_t samples, std::uint64_t seed) {
    score.validate();
    dist.validate();
    double closed;
    if (closed_form_ch(score, dist, &closed)) return closed;
    if (samples < 100000) {
        throw InvalidArgumentError("solve_ch_mc: samples must be at least 1e5");
    }
    const std::vector<double> eps = sample_errors(dist, samples, seed);
    auto g = [&](double c) {
        const double s = std::sqrt(c);
        double acc = 0.0;
        for (double e : eps) acc += score.h(e / s);
        return acc / static_cast<double>(samples) - 1.0;
    };
    return bisect_ch(g, score.name() + "/" + dist.label());
}

double solve_ch_quadrature(const ScoreFunction& score, const ErrorDistribution& dist) {
    score.validate();
    dist.validate();
    double closed;
    if (closed_form_ch(score, dist, &closed)) return closed;
    auto g = [&](double c) {
        const double s = std::sqrt(c);
        std::vector<double> kinks;
        if (score.kind == ScoreKind::Huber) kinks.push_back(score.tuning * s);
        auto hx = [&](double x) { return score.h(x / s); };
        return expect_quadrature(dist, hx, kinks) - 1.0;
    };
    return bisect_ch(g, score.name() + "/" + dist.label());
}

double alpha_dot_mc(const ScoreFunction& score, const ErrorDistribution& proxy,
                    std::size_t samples, std::uint64_t seed) {
    score.validate();
    proxy.validate();
    if (samples < 100000) {
        throw InvalidArgumentError("alpha_dot_mc: samples must be at least 1e5");
    }
    const std::vector<double> eps = sample_errors(proxy, samples, seed);
    double acc = 0.0;
    for (double e : eps) acc += e * score.h_dot(e);
    return acc / static_cast<double>(samples);
}

double alpha_dot_quadrature(const ScoreFunction& score, const ErrorDistribution& proxy) {
    score.validate();
    proxy.validate();
    // closed forms from the update-equation specializations
    if (score.kind == ScoreKind::QMLE) return 2.0 * proxy.second_moment();
    if (score.kind == ScoreKind::LAD) return proxy.abs_mean();
    std::vector<double> kinks;
    if (score.kind == ScoreKind::Huber) kinks.push_back(score.tuning);
    auto g = [&](double x) { return x * score.h_dot(x); };
    return expect_quadrature(proxy, g, kinks);
}

double default_alpha_dot(const ScoreFunction& score) {
    return alpha_dot_quadrature(score, ErrorDistribution::normal());
}

}  // namespace garchm
