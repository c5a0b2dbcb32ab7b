#include "core/distribution.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "core/errors.hpp"
#include "core/special.hpp"

namespace garchm {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

double raw_variance(const ErrorDistribution& d) {
    switch (d.kind) {
        case DistKind::Normal: return 1.0;
        case DistKind::DoubleExponential: return 2.0;
        case DistKind::Logistic: return kPi * kPi / 3.0;
        case DistKind::StudentT: return d.df > 2.0 ? d.df / (d.df - 2.0) : kInf;
    }
    return kInf;
}

double raw_abs_mean(const ErrorDistribution& d) {
    switch (d.kind) {
        case DistKind::Normal: return std::sqrt(2.0 / kPi);
        case DistKind::DoubleExponential: return 1.0;
        case DistKind::Logistic: return 2.0 * std::log(2.0);
        case DistKind::StudentT: {
            if (d.df <= 1.0) return kInf;
            const double nu = d.df;
            return 2.0 * std::sqrt(nu) *
                   std::exp(std::lgamma(0.5 * (nu + 1.0)) - std::lgamma(0.5 * nu)) /
                   ((nu - 1.0) * std::sqrt(kPi));
        }
    }
    return kInf;
}

double raw_pdf(const ErrorDistribution& d, double x) {
    switch (d.kind) {
        case DistKind::Normal: return normal_pdf(x);
        case DistKind::DoubleExponential: return 0.5 * std::exp(-std::abs(x));
        case DistKind::Logistic: {
            const double e = std::exp(-std::abs(x));
            const double s = 1.0 + e;
            return e / (s * s);
        }
        case DistKind::StudentT: return student_t_pdf(x, d.df);
    }
    return 0.0;
}

double raw_sample(const ErrorDistribution& d, Rng& rng) {
    const double u = rng.uniform01();
    switch (d.kind) {
        case DistKind::Normal: return normal_quantile(u);
        case DistKind::DoubleExponential:
            return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
        case DistKind::Logistic: return std::log(u / (1.0 - u));
        case DistKind::StudentT: return student_t_quantile(u, d.df);
    }
    return 0.0;
}

}  // namespace

ErrorDistribution ErrorDistribution::normal() { return {DistKind::Normal, 0.0, false}; }

ErrorDistribution ErrorDistribution::double_exponential(bool standardized) {
    return {DistKind::DoubleExponential, 0.0, standardized};
}

ErrorDistribution ErrorDistribution::logistic(bool standardized) {
    return {DistKind::Logistic, 0.0, standardized};
}

ErrorDistribution ErrorDistribution::student_t(double df, bool standardized) {
    return {DistKind::StudentT, df, standardized};
}

void ErrorDistribution::validate() const {
    if (kind == DistKind::StudentT && !(df > 0.0)) {
        throw InvalidArgumentError("student t requires degrees_freedom > 0");
    }
    if (standardized && !has_variance()) {
        throw InvalidArgumentError("cannot standardize " + label() +
                                   ": variance does not exist");
    }
}

double ErrorDistribution::scale() const {
    if (!standardized) return 1.0;
    const double v = raw_variance(*this);
    if (!std::isfinite(v)) {
        throw InvalidArgumentError("cannot standardize " + label() +
                                   ": variance does not exist");
    }
    return 1.0 / std::sqrt(v);
}

bool ErrorDistribution::has_variance() const { return std::isfinite(raw_variance(*this)); }

double ErrorDistribution::second_moment() const {
    if (standardized) return 1.0;
    return raw_variance(*this);
}

double ErrorDistribution::abs_mean() const {
    const double m = raw_abs_mean(*this);
    return std::isfinite(m) ? m * scale() : m;
}

double ErrorDistribution::pdf(double x) const {
    const double a = scale();
    return raw_pdf(*this, x / a) / a;
}

double ErrorDistribution::sample(Rng& rng) const { return scale() * raw_sample(*this, rng); }

std::string ErrorDistribution::label() const {
    switch (kind) {
        case DistKind::Normal: return "normal";
        case DistKind::DoubleExponential: return "de";
        case DistKind::Logistic: return "logistic";
        case DistKind::StudentT: {
            std::ostringstream os;
            os << "t(" << df << ")";
            return os.str();
        }
    }
    return "?";
}

ErrorDistribution parse_distribution(const std::string& text, bool standardized) {
    std::string name = text;
    double df = 0.0;
    const auto comma = text.find(',');
    if (comma != std::string::npos) {
        name = text.substr(0, comma);
        try {
            df = std::stod(text.substr(comma + 1));
        } catch (const std::exception&) {
            throw InvalidArgumentError("bad degrees of freedom in '" + text + "'");
        }
    }
    ErrorDistribution d;
    if (name == "normal" || name == "gaussian") {
        d = ErrorDistribution::normal();
    } else if (name == "de" || name == "laplace" || name == "double-exponential") {
        d = ErrorDistribution::double_exponential();
    } else if (name == "logistic") {
        d = ErrorDistribution::logistic();
    } else if (name == "t" || name == "student" || name == "student-t") {
        d = ErrorDistribution::student_t(df);
    } else {
        throw InvalidArgumentError("unknown distribution '" + text + "'");
    }
    d.standardized = standardized;
    d.validate();
    return d;
}

}  // namespace garchm
