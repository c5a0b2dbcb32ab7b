#pragma once

#include <cstdint>
#include <string>

#include "core/distribution.hpp"

namespace garchm {

enum class ScoreKind { QMLE, LAD, Huber, Mu, Cauchy };

// Score function H(x) = x*psi(x) of the scale M-estimation, with its
// derivative and tuning constant (k for Huber, mu for the mu-score).
struct ScoreFunction {
    ScoreKind kind = ScoreKind::QMLE;
    double tuning = 0.0;

    static ScoreFunction qmle() { return {ScoreKind::QMLE, 0.0}; }
    static ScoreFunction lad() { return {ScoreKind::LAD, 0.0}; }
    static ScoreFunction huber(double k);
    static ScoreFunction mu(double mu);
    static ScoreFunction cauchy() { return {ScoreKind::Cauchy, 0.0}; }

    void validate() const;

    double h(double x) const;
    double psi(double x) const;
    // One-sided conventions at the non-differentiable sets: 0 at the origin
    // for LAD/Mu, inner (quadratic) branch at |x| = k for Huber.
    double h_dot(double x) const;

    bool bounded() const { return kind == ScoreKind::Mu || kind == ScoreKind::Cauchy; }
    double h_sup() const;  // sup of H; +inf for unbounded kinds

    std::string name() const;
};

ScoreFunction parse_score(const std::string& name, double tuning);

// Identifiability constant c_H solving E[H(eps/sqrt(c))] = 1 by bisection on
// [1e-8, 1e4]. QMLE and LAD short-circuit to E(eps^2) and (E|eps|)^2.
// The Monte Carlo variant is bit-reproducible for a given seed.
double solve_ch_mc(const ScoreFunction& score, const ErrorDistribution& dist,
                   std::size_t samples, std::uint64_t seed);
double solve_ch_quadrature(const ScoreFunction& score, const ErrorDistribution& dist);

// alpha_dot(1) = E[eps * Hdot(eps)] under a proxy distribution.
double alpha_dot_mc(const ScoreFunction& score, const ErrorDistribution& proxy,
                    std::size_t samples, std::uint64_t seed);
double alpha_dot_quadrature(const ScoreFunction& score, const ErrorDistribution& proxy);

// Default IRLS step factor: alpha_dot(1) under the standard normal proxy.
double default_alpha_dot(const ScoreFunction& score);

}  // namespace garchm
