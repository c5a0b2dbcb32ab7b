#pragma once

#include <string>

#include "core/rng.hpp"

namespace garchm {

enum class DistKind { Normal, DoubleExponential, Logistic, StudentT };

// Innovation distribution, symmetric around zero. `standardized` rescales
// draws to unit variance (requires the variance to exist); the raw
// parameterization is N(0,1), Laplace(b=1), Logistic(s=1), t(df).
struct ErrorDistribution {
    DistKind kind = DistKind::Normal;
    double df = 0.0;           // StudentT only; non-integer allowed
    bool standardized = false;

    static ErrorDistribution normal();
    static ErrorDistribution double_exponential(bool standardized = false);
    static ErrorDistribution logistic(bool standardized = false);
    static ErrorDistribution student_t(double df, bool standardized = false);

    void validate() const;

    // multiplier applied to raw draws (1/raw_sd when standardized)
    double scale() const;

    bool has_variance() const;
    double second_moment() const;  // +inf when the variance does not exist
    double abs_mean() const;       // +inf when E|x| does not exist (t, df<=1)
    double pdf(double x) const;
    double sample(Rng& rng) const;

    std::string label() const;  // e.g. "normal", "t(3)"
};

ErrorDistribution parse_distribution(const std::string& text, bool standardized);

}  // namespace garchm
