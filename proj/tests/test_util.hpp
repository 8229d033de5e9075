#pragma once

// Independent oracles and random fixtures for the unit tests. Nothing here
// calls into the library's special-function layer.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Regularized lower incomplete gamma P(a, x): power series below a + 1,
// Lentz continued fraction above.
inline double gamma_p(double a, double x) {
  if (x <= 0) return 0.0;
  const double log_pref = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1) {
    double term = 1.0 / a, sum = term;
    for (int n = 1; n < 10000; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-17) break;
    }
    return sum * std::exp(log_pref);
  }
  const double tiny = 1e-300;
  double b = x + 1 - a, c = 1 / tiny, d = 1 / b, h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1) < 1e-17) break;
  }
  return 1.0 - std::exp(log_pref) * h;
}

inline double chisq_cdf(double df, double t) { return gamma_p(0.5 * df, 0.5 * t); }

// Chi-square quantile by bisection on the oracle CDF.
inline double chisq_quantile(double df, double p) {
  double lo = 0, hi = 1;
  while (chisq_cdf(df, hi) < p) hi *= 2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (chisq_cdf(df, mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// P((1/4) R^2 U^2 <= t) by conditioning on U: the integral over u of the
// chi^2_4 CDF at 4t/u^2, done with a composite Simpson rule after the
// substitution u = s^2 (smooths the u -> 0 end).
inline double r2u2_cdf(double t, int panels = 20000) {
  if (t <= 0) return 0.0;
  auto g = [t](double s) {
    if (s == 0) return 0.0;
    const double u = s * s;
    const double x = 2 * t / (u * u);  // chi^2_4 at 4t/u^2 is 1 - e^{-x}(1 + x)
    return 2 * s * (1 - std::exp(-x) * (1 + x));
  };
  const double h = 1.0 / panels;
  double sum = g(0) + g(1);
  for (int i = 1; i < panels; ++i) sum += (i % 2 ? 4 : 2) * g(i * h);
  return sum * h / 3;
}

inline std::mt19937_64& engine(std::uint64_t seed) {
  thread_local std::mt19937_64 e;
  e.seed(seed);
  return e;
}

inline Eigen::MatrixXd random_matrix(int r, int c, std::mt19937_64& e) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = n(e);
  return m;
}

inline Eigen::MatrixXd random_spd(int k, std::mt19937_64& e) {
  const Eigen::MatrixXd g = random_matrix(k, k, e);
  return g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(k, k);
}

inline Eigen::MatrixXd random_orthogonal(int k, std::mt19937_64& e) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(k, k, e));
  return qr.householderQ();
}

inline Eigen::MatrixXd tetrad_matrix() {
  // x1 x4 - x2 x3
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, 4);
  a(0, 3) = a(3, 0) = 0.5;
  a(1, 2) = a(2, 1) = -0.5;
  return a;
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace oracle
