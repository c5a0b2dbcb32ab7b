#include "core/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/errors.hpp"

namespace garchm {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}  // namespace

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        if (p == 0.0) return -std::numeric_limits<double>::infinity();
        if (p == 1.0) return std::numeric_limits<double>::infinity();
        throw InvalidArgumentError("normal_quantile: p must lie in (0,1)");
    }
    const double q = p - 0.5;
    double r;
    if (std::abs(q) <= 0.425) {
        r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double val;
    if (r <= 5.0) {
        r -= 1.6;
        val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                    2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                  3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
              (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                    1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                  6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                    1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                  2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
              (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                    1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                  1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                5.99832206555887937690e-1) * r + 1.0);
    }
    return (q < 0.0) ? -val : val;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-16;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw InvalidArgumentError("incomplete_beta: a,b must be > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                         a * std::log(x) + b * std::log1p(-x);
    const double bt = std::exp(ln_bt);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return bt * beta_cf(a, b, x) / a;
    }
    return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

double incomplete_beta_inv(double a, double b, double p) {
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    double x = 0.5;
    for (int it = 0; it < 200; ++it) {
        const double f = incomplete_beta(a, b, x) - p;
        if (f > 0.0) {
            hi = x;
        } else {
            lo = x;
        }
        // beta density at x, the derivative of I_x(a,b)
        const double ln_pdf = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                              (a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x);
        double step = f / std::exp(ln_pdf);
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // bisection safeguard
        if (std::abs(xn - x) < 1e-16 * (1.0 + std::abs(x))) return xn;
        x = xn;
    }
    return x;
}

double student_t_pdf(double x, double d) {
    if (!(d > 0.0)) throw InvalidArgumentError("student_t_pdf: d must be > 0");
    const double ln = std::lgamma(0.5 * (d + 1.0)) - std::lgamma(0.5 * d) -
                      0.5 * std::log(d * M_PI) -
                      0.5 * (d + 1.0) * std::log1p(x * x / d);
    return std::exp(ln);
}

double student_t_cdf(double x, double d) {
    if (!(d > 0.0)) throw InvalidArgumentError("student_t_cdf: d must be > 0");
    if (x == 0.0) return 0.5;
    const double z = d / (d + x * x);
    const double tail = 0.5 * incomplete_beta(0.5 * d, 0.5, z);
    return (x > 0.0) ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double d) {
    if (!(d > 0.0)) throw InvalidArgumentError("student_t_quantile: d must be > 0");
    if (!(p > 0.0 && p < 1.0))
        throw InvalidArgumentError("student_t_quantile: p must lie in (0,1)");
    if (p == 0.5) return 0.0;
    const double pp = (p > 0.5) ? 2.0 * (1.0 - p) : 2.0 * p;
    const double z = incomplete_beta_inv(0.5 * d, 0.5, pp);
    const double x = std::sqrt(d * (1.0 - z) / std::max(z, 1e-300));
    return (p > 0.5) ? x : -x;
}

namespace {

double simpson(double fa, double fm, double fb, double a, double b) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(const std::function<double(double)>& f, double a, double b, double fa,
                double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(fa, flm, fm, a, m);
    const double right = simpson(fm, frm, fb, m, b);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate_segment(const std::function<double(double)>& f, double a, double b,
                         double tol) {
    if (!(b > a)) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    return adaptive(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol, 60);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 const std::vector<double>& breakpoints) {
    std::vector<double> knots{a, b};
    for (double x : breakpoints) {
        if (x > a && x < b) knots.push_back(x);
    }
    std::sort(knots.begin(), knots.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        total += integrate_segment(f, knots[i], knots[i + 1],
                                   tol / static_cast<double>(knots.size() - 1));
    }
    return total;
}

double integrate_half_line(const std::function<double(double)>& f, double tol,
                           const std::vector<double>& breakpoints) {
    auto g = [&f](double u) {
        const double one_minus = 1.0 - u;
        const double x = u / one_minus;
        return f(x) / (one_minus * one_minus);
    };
    std::vector<double> knots;
    for (double x : breakpoints) {
        if (x > 0.0 && std::isfinite(x)) knots.push_back(x / (1.0 + x));
    }
    return integrate(g, 0.0, 1.0 - 1e-12, tol, knots);
}

}  // namespace garchm
