#pragma once

#include <functional>
#include <vector>

namespace garchm {

double normal_pdf(double x);
double normal_cdf(double x);

// Inverse standard normal CDF, Wichura's AS 241 (PPND16) rational
// approximation; relative error below 1e-15 on (0,1).
double normal_quantile(double p);

// Regularized incomplete beta I_x(a,b) by Lentz continued fraction.
double incomplete_beta(double a, double b, double x);

// Inverse of I_x(a,b) in x for p in [0,1]; Newton with bisection safeguard.
double incomplete_beta_inv(double a, double b, double p);

// Student-t with real d > 0 degrees of freedom.
double student_t_pdf(double x, double d);
double student_t_cdf(double x, double d);
double student_t_quantile(double p, double d);

// Adaptive Simpson on [a,b]; splits at interior breakpoints first (kinks of
// Huber-type integrands), then refines to absolute tolerance `tol`.
double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 const std::vector<double>& breakpoints = {});

// Integral of f over [0, inf) via the substitution x = u/(1-u).
double integrate_half_line(const std::function<double(double)>& f, double tol,
                           const std::vector<double>& breakpoints = {});

}  // namespace garchm
