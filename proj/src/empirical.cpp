#include "wald/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace wald {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : values_(std::move(samples)) {
  if (values_.size() < 2) throw std::invalid_argument("empirical distribution needs n >= 2");
  if (std::any_of(values_.begin(), values_.end(), [](double v) { return std::isnan(v); })) {
    throw std::invalid_argument("empirical distribution contains NaN");
  }
  std::sort(values_.begin(), values_.end());
}

double EmpiricalDistribution::cdf(double t) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), t);
  return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
}

double EmpiricalDistribution::quantile(double p) const {
  if (!(p > 0 && p < 1)) throw std::domain_error("quantile: p outside (0,1)");
  const auto n = static_cast<double>(values_.size());
  auto i = static_cast<std::size_t>(std::ceil(p * n));
  if (i == 0) i = 1;
  return values_[std::min(i, values_.size()) - 1];
}

double EmpiricalDistribution::mean() const {
  // long double accumulator for 10^7-sample means
  long double s = 0.0L;
  for (double v : values_) s += v;
  return static_cast<double>(s / static_cast<long double>(values_.size()));
}

EmpiricalDistribution EmpiricalDistribution::merge(const EmpiricalDistribution& a,
                                                   const EmpiricalDistribution& b) {
  std::vector<double> v;
  v.reserve(a.size() + b.size());
  std::merge(a.values_.begin(), a.values_.end(), b.values_.begin(), b.values_.end(),
             std::back_inserter(v));
  return EmpiricalDistribution(std::move(v));
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& x = a.values();
  const auto& y = b.values();
  const auto na = static_cast<double>(x.size());
  const auto nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace wald
