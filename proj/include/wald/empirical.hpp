#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wald {

/// Sorted Monte Carlo sample with ECDF and quantile lookups.
class EmpiricalDistribution {
 public:
  /// Sorts `samples`. Throws std::invalid_argument if fewer than 2 values or
  /// any NaN.
  explicit EmpiricalDistribution(std::vector<double> samples);

  std::size_t size() const noexcept { return values_.size(); }
  const std::vector<double>& values() const noexcept { return values_; }

  /// Fraction of samples <= t.
  double cdf(double t) const;
  /// Order-statistic quantile: smallest x_(i) with i/n >= p.
  double quantile(double p) const;
  double mean() const;

  /// Concatenates the two samples and re-sorts.
  static EmpiricalDistribution merge(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

 private:
  std::vector<double> values_;
};

/// Two-sample Kolmogorov-Smirnov statistic sup_t |F_a(t) - F_b(t)|, exact
/// over the merged jump points (ties handled).
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

}  // namespace wald
