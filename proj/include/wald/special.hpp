#pragma once

#include <functional>

namespace wald::special {

// Standard normal distribution function and upper tail, via erfc.
double normal_cdf(double x);
double normal_sf(double x);
double normal_pdf(double x);

// Chi-square distribution with `df` degrees of freedom (df > 0). Backed by
// the regularized incomplete gamma functions P(df/2, t/2) and Q(df/2, t/2).
double chisq_cdf(double df, double t);
double chisq_sf(double df, double t);
double chisq_pdf(double df, double t);
double chisq_quantile(double df, double p);

// Beta(a, b) distribution function and density on [0, 1].
double beta_cdf(double a, double b, double x);
double beta_pdf(double a, double b, double x);

/// Adaptive Gauss-Kronrod quadrature on a finite interval. Throws
/// std::runtime_error if the error estimate stays above `abs_tol` after the
/// maximum subdivision depth.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

/// Double-exponential quadrature on [a, b], tolerant of integrable endpoint
/// singularities.
double integrate_endpoint_singular(const std::function<double(double)>& f,
                                   double a, double b, double rel_tol = 1e-12);

/// Smallest-bracket root of an increasing function: returns x in [lo, hi] with
/// f(x) = target, to within `x_tol` in x (TOMS 748 with bisection fallback).
double invert_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi, double x_tol = 1e-14);

}  // namespace wald::special
