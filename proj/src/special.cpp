#include "wald/special.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

namespace wald::special {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double chisq_cdf(double df, double t) {
  if (!(df > 0)) throw std::domain_error("chisq_cdf: df must be positive");
  if (std::isnan(t)) return t;
  if (t <= 0) return 0.0;
  if (std::isinf(t)) return 1.0;
  return boost::math::gamma_p(0.5 * df, 0.5 * t);
}

double chisq_sf(double df, double t) {
  if (!(df > 0)) throw std::domain_error("chisq_sf: df must be positive");
  if (std::isnan(t)) return t;
  if (t <= 0) return 1.0;
  if (std::isinf(t)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * t);
}

double chisq_pdf(double df, double t) {
  if (t <= 0) return 0.0;
  // d/dt P(df/2, t/2) = 0.5 * gamma_p_derivative(df/2, t/2)
  return 0.5 * boost::math::gamma_p_derivative(0.5 * df, 0.5 * t);
}

double chisq_quantile(double df, double p) {
  if (!(p > 0 && p < 1)) throw std::domain_error("chisq_quantile: p outside (0,1)");
  return 2.0 * boost::math::gamma_p_inv(0.5 * df, p);
}

double beta_cdf(double a, double b, double x) {
  if (x <= 0) return 0.0;
  if (x >= 1) return 1.0;
  return boost::math::ibeta(a, b, x);
}

double beta_pdf(double a, double b, double x) {
  if (x <= 0 || x >= 1) return 0.0;
  return boost::math::ibeta_derivative(a, b, x);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (a == b) return 0.0;
  using gk = boost::math::quadrature::gauss_kronrod<double, 31>;
  double err = 0.0;
  double l1 = 0.0;
  // One fixed rule first to learn the scale, then turn the absolute target
  // into the relative one the adaptive routine expects. Asking for less than
  // ~1e-14 relative only makes it chase rounding noise down to max depth.
  gk::integrate(f, a, b, 0, 0.0, &err, &l1);
  const double rel = std::max(0.5 * abs_tol / std::max(l1, 1e-300), 1e-14);
  const double value = gk::integrate(f, a, b, 15, rel, &err, &l1);
  if (!(err <= abs_tol) && !(err <= 1e-13 * l1)) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "quadrature did not converge on [%g, %g]: error estimate %.3g, target %.3g", a,
                  b, err, abs_tol);
    throw std::runtime_error(msg);
  }
  return value;
}

double integrate_endpoint_singular(const std::function<double(double)>& f,
                                   double a, double b, double rel_tol) {
  if (a == b) return 0.0;
  // integrate() is non-const here (lazy tables), so one instance per thread.
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  auto g = [&f](double x) { return f(x); };
  return integrator.integrate(g, a, b, rel_tol);
}

double invert_increasing(const std::function<double(double)>& f, double target,
                         double lo, double hi, double x_tol) {
  auto g = [&](double x) { return f(x) - target; };
  double glo = g(lo);
  double ghi = g(hi);
  if (glo > 0 || ghi < 0) {
    throw std::domain_error("invert_increasing: target not bracketed");
  }
  if (glo == 0) return lo;
  if (ghi == 0) return hi;
  std::uintmax_t iters = 200;
  auto tol = [x_tol](double l, double h) { return h - l <= x_tol * std::max(1.0, std::abs(l)); };
  const auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace wald::special
