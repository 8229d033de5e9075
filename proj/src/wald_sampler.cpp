#include "wald/wald_sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace wald {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void check_config(const WaldSampleConfig& cfg) {
  if (cfg.n < 2) throw std::invalid_argument("sample size must be at least 2");
  if (!(cfg.denominator_guard > 0)) throw std::invalid_argument("denominator guard must be positive");
}

/// Shared draw loop. `value(rng, out)` returns false to request a redraw.
template <class Value>
std::vector<double> draw_loop(const WaldSampleConfig& cfg, Value&& make_value) {
  check_config(cfg);
  std::atomic<std::size_t> rejected{0};
  auto values = fill_batched(cfg.n, cfg.batch_size, cfg.seed, cfg.threads,
                             [&](Rng& rng, std::span<double> out) {
                               auto value = make_value();
                               std::size_t local_rejects = 0;
                               for (double& v : out) {
                                 while (!value(rng, v)) {
                                   if (++local_rejects > out.size() / 100 + 16) {
                                     throw DegenerateWaldError(
                                         "more than 1% of draws have a vanishing gradient "
                                         "denominator; the polynomial/covariance pair is degenerate");
                                   }
                                 }
                               }
                               rejected += local_rejects;
                             });
  if (rejected.load() * 100 > cfg.n) {
    throw DegenerateWaldError("rejection rate above 1% (" + std::to_string(rejected.load()) +
                              " of " + std::to_string(cfg.n) + " draws)");
  }
  return values;
}

/// W for f at x with covariance `sigma`; false when the denominator is below
/// the guard.
struct PolynomialWald {
  const HomogeneousPolynomial& f;
  const Eigen::MatrixXd& sigma;
  bool identity_sigma;
  double guard;
  std::vector<double> grad;

  bool operator()(std::span<const double> x, double& out) {
    const double fx = f.eval_with_gradient(x, grad);
    double denom = 0.0;
    const auto k = static_cast<Eigen::Index>(grad.size());
    if (identity_sigma) {
      for (double g : grad) denom += g * g;
    } else {
      for (Eigen::Index i = 0; i < k; ++i) {
        double row = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) row += sigma(i, j) * grad[static_cast<std::size_t>(j)];
        denom += grad[static_cast<std::size_t>(i)] * row;
      }
    }
    if (!(denom >= guard) || !std::isfinite(denom)) return false;
    out = fx * fx / denom;
    return true;
  }
};

std::vector<double> draw_polynomial(const HomogeneousPolynomial& f, const MvnSampler& sampler,
                                    const Eigen::MatrixXd& sigma, bool identity_sigma,
                                    const WaldSampleConfig& cfg) {
  const auto k = static_cast<std::size_t>(sampler.dimension());
  const auto m = static_cast<std::size_t>(sampler.latent_dimension());
  if (f.dimension() != k || static_cast<std::size_t>(sigma.rows()) != k) {
    throw std::invalid_argument("sample_wald: dimension mismatch between polynomial and covariance");
  }
  return draw_loop(cfg, [&] {
    return [&, z = std::vector<double>(m), x = std::vector<double>(k),
            w = PolynomialWald{f, sigma, identity_sigma, cfg.denominator_guard,
                               std::vector<double>(k)}](Rng& rng, double& out) mutable {
      sampler.draw(rng, z, x);
      return w(x, out);
    };
  });
}

}  // namespace

std::vector<double> draw_wald(const HomogeneousPolynomial& f, const CovarianceMatrix& sigma,
                              const WaldSampleConfig& cfg) {
  if (f.dimension() != static_cast<std::size_t>(sigma.dimension())) {
    throw std::invalid_argument("sample_wald: dimension mismatch between polynomial and covariance");
  }
  if (sigma.full_rank()) {
    return draw_polynomial(f, MvnSampler(sigma), sigma.matrix(), false, cfg);
  }
  // Reduce to rank(Sigma) variables with identity covariance.
  const auto m = static_cast<std::size_t>(sigma.rank());
  const HomogeneousPolynomial g = f.compose_linear(rank_reduction_basis(sigma)).restrict_leading(m);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(sigma.rank(), sigma.rank());
  return draw_polynomial(g, MvnSampler::from_factor(id), id, true, cfg);
}

std::vector<double> draw_wald(const MonomialForm& mono, const CovarianceMatrix& sigma,
                              const WaldSampleConfig& cfg) {
  const auto k = mono.dimension();
  if (k != static_cast<std::size_t>(sigma.dimension())) {
    throw std::invalid_argument("sample_wald: dimension mismatch between monomial and covariance");
  }
  const MvnSampler sampler(sigma);
  const auto m = static_cast<std::size_t>(sampler.latent_dimension());
  const Eigen::MatrixXd& s = sigma.matrix();
  const auto& alpha = mono.exponents();
  return draw_loop(cfg, [&] {
    return [&, z = std::vector<double>(m), x = std::vector<double>(k),
            v = std::vector<double>(k)](Rng& rng, double& out) mutable {
      sampler.draw(rng, z, x);
      for (std::size_t i = 0; i < k; ++i) v[i] = alpha[i] / x[i];
      double q = 0.0;
      for (std::size_t i = 0; i < k; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
          row += s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * v[j];
        }
        q += v[i] * row;
      }
      if (!(q > 0) || !std::isfinite(q)) return false;
      out = 1.0 / q;
      return true;
    };
  });
}

std::vector<double> draw_wald_coupled(const HomogeneousPolynomial& f, const MvnSampler& sampler,
                                      const Eigen::MatrixXd& sigma, const WaldSampleConfig& cfg) {
  return draw_polynomial(f, sampler, sigma, false, cfg);
}

EmpiricalDistribution sample_wald(const HomogeneousPolynomial& f, const CovarianceMatrix& sigma,
                                  const WaldSampleConfig& cfg) {
  return EmpiricalDistribution(draw_wald(f, sigma, cfg));
}

EmpiricalDistribution sample_wald(const MonomialForm& m, const CovarianceMatrix& sigma,
                                  const WaldSampleConfig& cfg) {
  return EmpiricalDistribution(draw_wald(m, sigma, cfg));
}

double ks_distance(const EmpiricalDistribution& emp, const std::function<double(double)>& cdf) {
  const auto& x = emp.values();
  const std::size_t m = x.size();
  const auto n = static_cast<double>(m);
  std::vector<double> f(m, std::numeric_limits<double>::quiet_NaN());
  double d = 0.0;
  auto eval = [&](std::size_t i) {
    f[i] = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f[i], f[i] - static_cast<double>(i) / n});
  };
  // Exact, but lazy: F is monotone, so on the samples strictly between i and
  // j the deviation is at most max((j)/n - F(x_i), F(x_j) - (i+1)/n). Blocks
  // that cannot beat the running maximum are never evaluated.
  constexpr std::size_t kStride = 256;
  std::vector<std::size_t> knots;
  for (std::size_t i = 0; i < m; i += kStride) knots.push_back(i);
  if (m > 0 && knots.back() != m - 1) knots.push_back(m - 1);
  for (std::size_t i : knots) eval(i);
  std::vector<std::pair<std::size_t, std::size_t>> stack;
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) stack.emplace_back(knots[k], knots[k + 1]);
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    stack.pop_back();
    if (j <= i + 1) continue;
    const double bound = std::max(static_cast<double>(j) / n - f[i], f[j] - static_cast<double>(i + 1) / n);
    if (bound <= d) continue;
    const std::size_t mid = i + (j - i) / 2;
    eval(mid);
    stack.emplace_back(i, mid);
    stack.emplace_back(mid, j);
  }
  return d;
}

double ks_distance(const EmpiricalDistribution& emp, const LimitLaw& law) {
  if (const auto* e = std::get_if<Empirical>(&law)) return ks_two_sample(emp, *e->samples);
  validate(law);
  return ks_distance(emp, [&law](double t) { return cdf(law, t); });
}

double ks_distance(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  return ks_two_sample(a, b);
}

double evaluate_cdf(const CdfSource& source, double t) {
  return std::visit(overloaded{
                        [t](const LimitLaw& law) { return cdf(law, t); },
                        [t](const EmpiricalDistribution& e) { return e.cdf(t); },
                        [t](const std::function<double(double)>& f) { return f(t); },
                    },
                    source);
}

DominanceReport dominance_check(const CdfSource& lower, const CdfSource& upper,
                                std::span<const double> grid, double slack) {
  if (grid.empty()) throw std::invalid_argument("dominance_check: empty grid");
  if (!(slack >= 0)) throw std::invalid_argument("dominance_check: slack must be >= 0");
  DominanceReport r;
  r.grid_points = grid.size();
  r.worst_gap = -std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const double gap = evaluate_cdf(upper, t) - evaluate_cdf(lower, t);
    if (gap > r.worst_gap) {
      r.worst_gap = gap;
      r.worst_t = t;
    }
  }
  r.pass = r.worst_gap <= slack;
  return r;
}

std::vector<double> linear_grid(double from, double to, std::size_t points) {
  if (points < 2) return {from};
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) {
    g[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return g;
}

}  // namespace wald
