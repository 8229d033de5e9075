#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "wald/empirical.hpp"
#include "wald/gaussian.hpp"
#include "wald/limit_laws.hpp"
#include "wald/parallel.hpp"
#include "wald/polynomial.hpp"

namespace wald {

struct WaldSampleConfig {
  std::size_t n = 1'000'000;
  std::uint64_t seed = 42;
  std::size_t batch_size = kDefaultBatchSize;
  /// Draws with gradient quadratic form below this are redrawn.
  double denominator_guard = 1e-300;
  unsigned threads = 1;
};

/// Raised when more than 1% of draws hit the denominator guard.
class DegenerateWaldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw draws of W = f(X)^2 / (grad f(X)^T Sigma grad f(X)), X ~ N(0, Sigma),
/// in batch order (unsorted).
///
/// For a rank-deficient Sigma the polynomial is first reduced to rank(Sigma)
/// variables (f -> f o B with trailing coordinates set to zero) and sampled
/// with identity covariance.
std::vector<double> draw_wald(const HomogeneousPolynomial& f, const CovarianceMatrix& sigma,
                              const WaldSampleConfig& cfg);

/// Real-exponent monomial: uses 1/W = v^T Sigma v with v_i = a_i / X_i, which
/// avoids forming the powers. Sampled directly as X = B Z.
std::vector<double> draw_wald(const MonomialForm& m, const CovarianceMatrix& sigma,
                              const WaldSampleConfig& cfg);

/// Coupled draws: X = B Z with the caller's factor B (k x m) and Sigma given
/// separately. Used to check pathwise identities between different (f, Sigma)
/// pairs driven by the same Z.
std::vector<double> draw_wald_coupled(const HomogeneousPolynomial& f, const MvnSampler& sampler,
                                      const Eigen::MatrixXd& sigma, const WaldSampleConfig& cfg);

EmpiricalDistribution sample_wald(const HomogeneousPolynomial& f, const CovarianceMatrix& sigma,
                                  const WaldSampleConfig& cfg);
EmpiricalDistribution sample_wald(const MonomialForm& m, const CovarianceMatrix& sigma,
                                  const WaldSampleConfig& cfg);

/// One-sample KS distance sup_t |F_n(t) - F(t)|, evaluated exactly at the
/// jump points with both one-sided gaps. For an Empirical law this falls back
/// to the two-sample statistic.
double ks_distance(const EmpiricalDistribution& emp, const LimitLaw& law);
double ks_distance(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf);
double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Anything with a distribution function.
using CdfSource = std::variant<LimitLaw, EmpiricalDistribution, std::function<double(double)>>;

double evaluate_cdf(const CdfSource& source, double t);

struct DominanceReport {
  bool pass = true;
  /// max over the grid of F_upper(t) - F_lower(t); <= slack when passing.
  double worst_gap = 0.0;
  double worst_t = 0.0;
  std::size_t grid_points = 0;
};

/// Checks lower <=_st upper on the grid, i.e. F_lower(t) >= F_upper(t) - slack.
DominanceReport dominance_check(const CdfSource& lower, const CdfSource& upper,
                                std::span<const double> grid, double slack);

/// Evenly spaced grid from `from` to `to` inclusive.
std::vector<double> linear_grid(double from, double to, std::size_t points);

}  // namespace wald
