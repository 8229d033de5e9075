#include "wald/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "wald/empirical.hpp"
#include "wald/parallel.hpp"
#include "wald/quad_classify.hpp"
#include "wald/special.hpp"
#include "wald/tetrad.hpp"
#include "wald/wald_sampler.hpp"

namespace wald {
namespace {

constexpr double kKs = 0.003;
constexpr double kKsConjecture = 0.005;
constexpr double kDominanceSlack = 0.005;
constexpr double kClosedFormSlack = 1e-9;

WaldSampleConfig config(std::size_t n, std::uint64_t seed, unsigned threads) {
  WaldSampleConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

double ks_vs(std::vector<double> draws, const std::function<double(double)>& f) {
  return ks_distance(EmpiricalDistribution(std::move(draws)), f);
}

bool is_diagonal(const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0.0) return false;
  return true;
}

void check_weights(std::span<const double> p, Eigen::Index k) {
  if (static_cast<Eigen::Index>(p.size()) != k) {
    throw std::invalid_argument("weight vector length does not match the covariance");
  }
  double s = 0.0;
  for (double v : p) {
    if (!(v >= 0)) throw std::invalid_argument("weights must be nonnegative");
    s += v;
  }
  if (std::abs(s - 1.0) > 1e-12) throw std::invalid_argument("weights must sum to 1");
}

double max_relative_difference(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), std::numeric_limits<double>::min()});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd correlation2(double rho) {
  Eigen::MatrixXd s(2, 2);
  s << 1.0, rho, rho, 1.0;
  return s;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

}  // namespace

const char* tier_name(Tier t) { return t == Tier::theorem ? "theorem" : "conjecture-evidence"; }

VerificationResult make_result(std::string name, Tier tier, double statistic, double threshold,
                               std::size_t n, std::uint64_t seed) {
  VerificationResult r;
  r.name = std::move(name);
  r.tier = tier;
  r.statistic = statistic;
  r.threshold = threshold;
  r.pass = statistic <= threshold;
  r.n_used = n;
  r.seed = seed;
  return r;
}

VerificationResult verify_monomial_theorem(const MonomialForm& m, const CovarianceMatrix& sigma,
                                           std::size_t n, std::uint64_t seed, unsigned threads) {
  if (m.dimension() != 2) throw std::invalid_argument("verify_monomial_theorem needs k = 2");
  const LimitLaw law = monomial_law(m);
  const double d = ks_distance(sample_wald(m, sigma, config(n, seed, threads)), law);
  return make_result("monomial", Tier::theorem, d, kKs, n, seed);
}

VerificationResult verify_conjecture_monomial(const MonomialForm& m, const CovarianceMatrix& sigma,
                                              std::size_t n, std::uint64_t seed,
                                              unsigned threads) {
  const bool proven = m.dimension() <= 2 || is_diagonal(sigma.matrix());
  const LimitLaw law = monomial_law(m);
  const double d = ks_distance(sample_wald(m, sigma, config(n, seed, threads)), law);
  return make_result("conjecture.monomial", proven ? Tier::theorem : Tier::conjecture, d,
                     proven ? kKs : kKsConjecture, n, seed);
}

VerificationResult verify_cauchy(std::span<const double> p, const CovarianceMatrix& sigma,
                                 std::size_t n, std::uint64_t seed, unsigned threads) {
  const auto k = static_cast<std::size_t>(sigma.dimension());
  check_weights(p, sigma.dimension());
  const MvnSampler sampler(sigma);
  const auto m = static_cast<std::size_t>(sampler.latent_dimension());
  const std::vector<double> w(p.begin(), p.end());
  auto draws = fill_batched(n, kDefaultBatchSize, seed, threads, [&](Rng& rng, std::span<double> out) {
    std::vector<double> z(m), x(k), y(k);
    for (double& v : out) {
      sampler.draw(rng, z, x);
      sampler.draw(rng, z, y);
      double s = 0.0;
      for (std::size_t i = 0; i < k; ++i) s += w[i] * y[i] / x[i];
      v = s;
    }
  });
  const bool proven = k <= 2;
  return make_result("cauchy", proven ? Tier::theorem : Tier::conjecture,
                     ks_vs(std::move(draws), cauchy_cdf), proven ? kKs : kKsConjecture, n, seed);
}

VerificationResult verify_reciprocal(std::span<const double> p, const CovarianceMatrix& sigma,
                                     std::size_t n, std::uint64_t seed, unsigned threads) {
  const auto k = static_cast<std::size_t>(sigma.dimension());
  check_weights(p, sigma.dimension());
  const MvnSampler sampler(sigma);
  const auto m = static_cast<std::size_t>(sampler.latent_dimension());
  const Eigen::MatrixXd& s = sigma.matrix();
  const std::vector<double> w(p.begin(), p.end());
  auto draws = fill_batched(n, kDefaultBatchSize, seed, threads, [&](Rng& rng, std::span<double> out) {
    std::vector<double> z(m), x(k);
    Eigen::VectorXd v(static_cast<Eigen::Index>(k));
    for (double& r : out) {
      sampler.draw(rng, z, x);
      for (std::size_t i = 0; i < k; ++i) v(static_cast<Eigen::Index>(i)) = w[i] / x[i];
      r = v.dot(s * v);
    }
  });
  const bool proven = k <= 2 || is_diagonal(s);
  return make_result("reciprocal", proven ? Tier::theorem : Tier::conjecture,
                     ks_vs(std::move(draws), inverse_chisq1_cdf), proven ? kKs : kKsConjecture, n,
                     seed);
}

std::vector<double> draw_counterexample_q(double rho, std::size_t n, std::uint64_t seed,
                                          unsigned threads) {
  if (!(std::abs(rho) < 1)) throw std::domain_error("counterexample needs |rho| < 1");
  const double c = std::sqrt(1.0 - rho * rho);
  return fill_batched(n, kDefaultBatchSize, seed, threads, [&](Rng& rng, std::span<double> out) {
    for (double& q : out) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      const double x1 = z1;
      const double x2 = rho * z1 + c * z2;
      q = 4.0 / (1.0 / (x1 * x1) - 2.0 * rho / (x1 * x2) + 1.0 / (x2 * x2));
    }
  });
}

VerificationResult counterexample_negative_weights(double rho, std::size_t n, std::uint64_t seed,
                                                   unsigned threads) {
  const auto q = draw_counterexample_q(rho, n, seed, threads);
  long double sum = 0.0L;
  for (double v : q) sum += v;
  const double mean = static_cast<double>(sum / static_cast<long double>(q.size()));
  const double expected = (1.0 + 2.0 * rho * rho) / (1.0 - rho * rho);
  return make_result("counterexample.mean", Tier::theorem, std::abs(mean / expected - 1.0), 0.02, n,
                     seed);
}

VerificationResult counterexample_law_differs(double rho, std::size_t n, std::uint64_t seed,
                                              unsigned threads) {
  const double d = ks_distance(EmpiricalDistribution(draw_counterexample_q(rho, n, seed, threads)),
                               LimitLaw{ScaledChiSquare{1.0, 1}});
  return make_result("counterexample.law-differs", Tier::theorem, -d, -0.01, n, seed);
}

double moment_t(double psi, double phi, double sigma) {
  const double num = 2.0 - std::cos(2.0 * phi) + 2.0 * std::cos(psi - phi) - std::cos(2.0 * psi) -
                     2.0 * std::cos(psi + phi);
  const double den = 1.0 - sigma * std::cos(2.0 * phi) +
                     (1.0 + sigma) * (sigma + std::cos(psi - phi) - sigma * std::cos(psi + phi));
  return num / den;
}

double moment_t_factored(double psi, double phi, double sigma) {
  const double sp = std::sin(phi);
  const double a = 1.0 + sigma * sigma + 2.0 * sigma * sp * sp;
  const double b = (1.0 - sigma * sigma) * std::cos(phi);
  const double c = (1.0 + sigma) * (1.0 + sigma) * sp;
  const double r = std::hypot(b, c);
  const double psi0 = std::atan2(c, b);
  const double cp2 = std::cos(phi) * std::cos(phi);
  const double h = std::cos(0.5 * (psi - psi0));
  const double den = 4.0 * sigma * sigma * cp2 * cp2 / (a + r) + 2.0 * r * h * h;
  const double u = std::sin(0.5 * (psi + phi)) * std::cos(0.5 * (psi - phi));
  return 8.0 * u * u / den;
}

double moment_t_prime_inverse(double psi_big, double phi, double sigma) {
  const double c = std::cos(psi_big - 0.5 * phi);
  const double s = std::sin(psi_big + 0.5 * phi);
  return 1.0 / (c * c) + 2.0 * std::sin(phi) / (sigma * c * s) + 1.0 / (sigma * sigma * s * s);
}

MomentTable moment_invariance_check(double sigma, std::span<const double> phis,
                                    std::span<const int> ms) {
  if (!(sigma > 0)) throw std::domain_error("moment_invariance_check needs sigma > 0");
  if (phis.empty() || ms.empty()) throw std::invalid_argument("moment_invariance_check: empty grid");
  for (double phi : phis) {
    if (!(phi >= 0 && phi < 0.5 * std::numbers::pi)) {
      throw std::domain_error("phi must lie in [0, pi/2)");
    }
  }
  for (int m : ms) {
    if (m < 1) throw std::domain_error("moment orders must be positive");
  }
  MomentTable table;
  table.sigma = sigma;
  table.phis.assign(phis.begin(), phis.end());
  table.ms.assign(ms.begin(), ms.end());
  constexpr int kPieces = 16;
  const double width = 2.0 * std::numbers::pi / kPieces;
  for (int m : ms) {
    std::vector<double> row;
    for (double phi : phis) {
      auto f = [&](double psi) { return std::pow(moment_t_factored(psi, phi, sigma), m); };
      // Start the period where the denominator is smallest so the sharp
      // feature near phi -> pi/2 sits on piece boundaries.
      const double sp = std::sin(phi);
      const double start = std::atan2((1.0 + sigma) * (1.0 + sigma) * sp,
                                      (1.0 - sigma * sigma) * std::cos(phi)) +
                           std::numbers::pi;
      double total = 0.0;
      for (int p = 0; p < kPieces; ++p) {
        total += special::integrate(f, start + p * width, start + (p + 1) * width, 1e-10 / kPieces);
      }
      row.push_back(total / (2.0 * std::numbers::pi));
    }
    for (double v : row) table.max_deviation = std::max(table.max_deviation, std::abs(v - row.front()));
    table.moments.push_back(std::move(row));
  }
  return table;
}

VerificationResult verify_moment_invariance(double sigma, std::span<const double> phis,
                                            std::span<const int> ms) {
  const MomentTable t = moment_invariance_check(sigma, phis, ms);
  return make_result("moments.invariance", Tier::theorem, t.max_deviation, 1e-8, phis.size() * ms.size(),
                     0);
}

VerificationResult verify_doubled_angle(double sigma, double phi, std::size_t n,
                                        std::uint64_t seed) {
  Rng rng(seed, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double psi = 2.0 * std::numbers::pi * rng.uniform_open();
    const double direct = 1.0 / moment_t_prime_inverse(psi, phi, sigma);
    const double doubled = 0.25 * sigma * sigma * moment_t(2.0 * psi, phi, sigma);
    worst = std::max(worst, std::abs(direct - doubled) / (1.0 + std::abs(direct)));
  }
  return make_result("moments.doubled-angle", Tier::theorem, worst, 1e-8, n, seed);
}

VerificationResult verify_moment_sampler(double sigma, double phi, std::size_t n,
                                         std::uint64_t seed, unsigned threads) {
  const double phis[] = {phi};
  const int ms[] = {1};
  const double et = moment_invariance_check(sigma, phis, ms).moments[0][0];
  const MonomialForm f({1.0, 1.0 / sigma});
  const auto sig = CovarianceMatrix::validate(correlation2(std::sin(phi)));
  const double mean = sample_wald(f, sig, config(n, seed, threads)).mean();
  const double expected = 0.5 * sigma * sigma * et;
  return make_result("moments.sampler", Tier::theorem, std::abs(mean / expected - 1.0), 0.01, n,
                     seed);
}

VerificationResult verify_trig_lemma(double c, std::size_t n, std::uint64_t seed, unsigned threads) {
  auto s_c = fill_batched(n, kDefaultBatchSize, seed, threads, [&](Rng& rng, std::span<double> out) {
    for (double& v : out) {
      const double psi = 2.0 * std::numbers::pi * rng.uniform();
      const double co = std::cos(psi);
      const double si = std::sin(psi);
      const double den = co * co + c * c * si * si;
      v = den == 0.0 ? 0.0 : (1.0 + c) * (1.0 + c) * co * co * si * si / den;
    }
  });
  auto cos2 = fill_batched(n, kDefaultBatchSize, splitmix64(seed), threads,
                           [&](Rng& rng, std::span<double> out) {
                             for (double& v : out) {
                               const double co = std::cos(2.0 * std::numbers::pi * rng.uniform());
                               v = co * co;
                             }
                           });
  const double d = ks_two_sample(EmpiricalDistribution(std::move(s_c)),
                                 EmpiricalDistribution(std::move(cos2)));
  if (c >= 0) return make_result("trig", Tier::theorem, d, kKs, n, seed);
  return make_result("trig.negative-c", Tier::theorem, -d, -0.01, n, seed);
}

VerificationResult verify_beta_representation(int k1, int k2, std::size_t n, std::uint64_t seed,
                                              unsigned threads) {
  if (k1 < 1 || k2 < 1) throw std::invalid_argument("verify_beta_representation needs k1, k2 >= 1");
  std::vector<double> lams(static_cast<std::size_t>(k1), 1.0);
  lams.insert(lams.end(), static_cast<std::size_t>(k2), -1.0);
  const auto canon = sample_canonical(lams, n, seed, threads);
  const auto law = sample_law(FoldedBetaProduct{k1, k2}, n, splitmix64(seed), threads);
  return make_result("beta", Tier::theorem, ks_two_sample(canon, law), kKs, n, seed);
}

std::vector<VerificationResult> verify_bounds_suite(std::size_t n, std::uint64_t seed,
                                                    unsigned threads) {
  std::vector<VerificationResult> out;
  std::uint64_t state = seed;
  auto grid_for = [](double hi) { return linear_grid(0.0, hi, 400); };

  // Upper bound (1/4) chi^2_k for arbitrary spectra.
  Rng spec_rng(seed, 1u << 20);
  for (int s = 0; s < 20; ++s) {
    const int k = 2 + static_cast<int>(spec_rng.uniform() * 5.0);
    std::vector<double> lams(static_cast<std::size_t>(k));
    for (double& l : lams) l = 2.0 * spec_rng.uniform_open() - 1.0;
    const std::uint64_t sd = splitmix64(state);
    const LimitLaw upper = ScaledChiSquare{0.25, k};
    const auto grid = grid_for(quantile(upper, 0.9999));
    const auto rep = dominance_check(sample_canonical(lams, n, sd, threads), upper, grid, kDominanceSlack);
    char name[48];
    std::snprintf(name, sizeof name, "bounds.upper.%02d", s);
    out.push_back(make_result(name, Tier::theorem, rep.worst_gap, kDominanceSlack, n, sd));
  }

  // Lower bound (1/4) chi^2_1 for nonnegative spectra.
  const LimitLaw quarter = ScaledChiSquare{0.25, 1};
  const std::vector<std::vector<double>> nonneg = {
      {1.0, 0.5, 0.1}, {1.0, 0.2}, {3.0, 1.0, 1.0, 0.01}, {1.0, 0.9, 0.8, 0.7, 0.6, 0.5}, {5.0, 0.1}};
  for (std::size_t s = 0; s < nonneg.size(); ++s) {
    const std::uint64_t sd = splitmix64(state);
    const auto emp = sample_canonical(nonneg[s], n, sd, threads);
    const auto rep = dominance_check(quarter, emp, grid_for(emp.quantile(0.9999)), kDominanceSlack);
    out.push_back(make_result("bounds.lower-nonneg." + std::to_string(s), Tier::theorem,
                              rep.worst_gap, kDominanceSlack, n, sd));
  }

  // Lower bound (1/4) chi^2_1 for +-1 spectra.
  const std::pair<int, int> pm[] = {{1, 2}, {2, 1}, {2, 3}, {3, 3}, {1, 4}};
  for (const auto& [k1, k2] : pm) {
    std::vector<double> lams(static_cast<std::size_t>(k1), 1.0);
    lams.insert(lams.end(), static_cast<std::size_t>(k2), -1.0);
    const std::uint64_t sd = splitmix64(state);
    const auto emp = sample_canonical(lams, n, sd, threads);
    const auto rep = dominance_check(quarter, emp, grid_for(emp.quantile(0.9999)), kDominanceSlack);
    out.push_back(make_result("bounds.lower-pm." + std::to_string(k1) + "-" + std::to_string(k2),
                              Tier::theorem, rep.worst_gap, kDominanceSlack, n, sd));
  }

  // Equality case of the upper bound.
  {
    const std::uint64_t sd = splitmix64(state);
    const std::vector<double> ones = {1.0, 1.0, 1.0};
    const double d = ks_distance(sample_canonical(ones, n, sd, threads), LimitLaw{ScaledChiSquare{0.25, 3}});
    out.push_back(make_result("bounds.upper-equality", Tier::theorem, d, kKs, n, sd));
  }

  // Tetrad law below chi^2_1, closed forms only.
  {
    const auto rep = dominance_check(LimitLaw{TetradSingular{}}, LimitLaw{ScaledChiSquare{1.0, 1}},
                                     linear_grid(0.0, 50.0, 5001), kClosedFormSlack);
    out.push_back(make_result("bounds.tetrad-chisq", Tier::theorem, rep.worst_gap, kClosedFormSlack,
                              rep.grid_points, 0));
  }
  return out;
}

std::vector<double> tetrad_replicates(const Eigen::MatrixXd& theta, std::size_t n_data,
                                      std::size_t replicates, std::uint64_t seed,
                                      unsigned threads) {
  if (theta.rows() < 4) throw std::invalid_argument("tetrad_replicates needs p >= 4");
  if (n_data <= static_cast<std::size_t>(theta.rows())) {
    throw std::invalid_argument("tetrad_replicates needs n_data > p");
  }
  const MvnSampler sampler(CovarianceMatrix::validate(theta));
  const auto p = static_cast<std::size_t>(theta.rows());
  const auto m = static_cast<std::size_t>(sampler.latent_dimension());
  const TetradIndex idx{0, 1, 2, 3};
  std::vector<double> t(replicates);
  for_each_batch(replicates, threads, [&](std::size_t r) {
    Rng rng(seed, r);
    std::vector<double> z(m), x(p);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p));
    for (std::size_t i = 0; i < n_data; ++i) {
      sampler.draw(rng, z, x);
      const Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<Eigen::Index>(p));
      sum += xv;
      cross.selfadjointView<Eigen::Lower>().rankUpdate(xv);
    }
    const double nd = static_cast<double>(n_data);
    const Eigen::VectorXd mean = sum / nd;
    Eigen::MatrixXd theta_hat = cross.selfadjointView<Eigen::Lower>();
    theta_hat = theta_hat / nd - mean * mean.transpose();
    t[r] = wald_tetrad_test(theta_hat, static_cast<Eigen::Index>(n_data), idx).t_stat;
  });
  return t;
}

VerificationResult verify_prop1_convergence(const Eigen::MatrixXd& theta, std::size_t n_data,
                                            std::size_t replicates, std::uint64_t seed,
                                            unsigned threads) {
  const TetradStat s = tetrad_stat(theta, TetradIndex{0, 1, 2, 3});
  const bool singular = std::all_of(s.gradient.begin(), s.gradient.end(), [](double g) { return g == 0.0; });
  const LimitLaw limit = singular ? LimitLaw{TetradSingular{}} : LimitLaw{ScaledChiSquare{1.0, 1}};
  const EmpiricalDistribution t(tetrad_replicates(theta, n_data, replicates, seed, threads));
  const auto ref = sample_law(limit, 1'000'000, splitmix64(seed), threads);
  return make_result(singular ? "wald-normal.singular" : "wald-normal.regular", Tier::theorem,
                     ks_two_sample(t, ref), 0.03, replicates, seed);
}

VerificationResult verify_stable_convolution(double alpha, double beta, std::size_t n,
                                             std::uint64_t seed, unsigned threads) {
  if (!(alpha > 0) || !(beta > 0)) throw std::domain_error("stable parameters must be positive");
  auto sum = fill_batched(n, kDefaultBatchSize, seed, threads, [&](Rng& rng, std::span<double> out) {
    for (double& v : out) {
      const double z1 = rng.normal();
      const double z2 = rng.normal();
      v = alpha * alpha / (z1 * z1) + beta * beta / (z2 * z2);
    }
  });
  const double g = alpha + beta;
  auto direct = fill_batched(n, kDefaultBatchSize, splitmix64(seed), threads,
                             [&](Rng& rng, std::span<double> out) {
                               for (double& v : out) {
                                 const double z = rng.normal();
                                 v = g * g / (z * z);
                               }
                             });
  const double d = ks_two_sample(EmpiricalDistribution(std::move(sum)),
                                 EmpiricalDistribution(std::move(direct)));
  return make_result("stable.convolution", Tier::theorem, d, kKs, n, seed);
}

VerificationResult verify_scale_invariance(const HomogeneousPolynomial& f,
                                           const CovarianceMatrix& sigma, double c,
                                           std::size_t n, std::uint64_t seed) {
  const auto cfg = config(n, seed, 1);
  const auto a = draw_wald(f, sigma, cfg);
  const auto b = draw_wald(f.scale(c), sigma, cfg);
  int e = 0;
  const bool power_of_two = std::abs(std::frexp(c, &e)) == 0.5;
  return make_result("invariance.scale", Tier::theorem, max_relative_difference(a, b),
                     power_of_two ? 0.0 : 1e-8, n, seed);
}

VerificationResult verify_linear_invariance(const HomogeneousPolynomial& f,
                                            const CovarianceMatrix& sigma,
                                            const Eigen::MatrixXd& b, std::size_t n,
                                            std::uint64_t seed) {
  const auto cfg = config(n, seed, 1);
  const Eigen::MatrixXd l = factor(sigma);
  const Eigen::MatrixXd b_inv = b.inverse();
  const Eigen::MatrixXd sigma_y = b_inv * sigma.matrix() * b_inv.transpose();
  const auto x = draw_wald_coupled(f, MvnSampler::from_factor(l), sigma.matrix(), cfg);
  const auto y = draw_wald_coupled(f.compose_linear(b), MvnSampler::from_factor(b_inv * l), sigma_y, cfg);
  return make_result("invariance.linear", Tier::theorem, max_relative_difference(x, y), 1e-8, n, seed);
}

VerificationResult verify_quadratic_law(const QuadraticForm& a, const CovarianceMatrix& sigma,
                                        std::size_t n, std::uint64_t seed, unsigned threads) {
  const auto c = classify(a, sigma);
  if (!c.law) {
    return make_result("quadratic", Tier::theorem, std::numeric_limits<double>::infinity(), kKs, n, seed);
  }
  const double d = ks_distance(sample_wald(a.to_polynomial(), sigma, config(n, seed, threads)), *c.law);
  return make_result("quadratic", Tier::theorem, d, kKs, n, seed);
}

Eigen::MatrixXd random_correlation(int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("random_correlation needs k >= 1");
  Rng rng(seed, 0);
  Eigen::MatrixXd g(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) g(i, j) = rng.normal();
  Eigen::MatrixXd s = g * g.transpose() / k + 0.2 * Eigen::MatrixXd::Identity(k, k);
  const Eigen::VectorXd d = s.diagonal().cwiseSqrt().cwiseInverse();
  s = d.asDiagonal() * s * d.asDiagonal();
  s.diagonal().setOnes();
  return s;
}

Suite parse_suite(std::string_view s) {
  if (s == "all") return Suite::all;
  if (s == "theorems") return Suite::theorems;
  if (s == "conjectures") return Suite::conjectures;
  throw std::invalid_argument("unknown suite '" + std::string(s) + "' (all|theorems|conjectures)");
}

std::uint64_t check_seed(std::uint64_t seed, std::string_view name) {
  std::uint64_t state = seed ^ fnv1a(std::string(name).c_str());
  return splitmix64(state);
}

namespace {

struct Check {
  std::string name;
  Tier tier;
  std::function<std::vector<VerificationResult>(std::uint64_t)> run;
  // Result-name prefixes of a grouped check; empty for single checks.
  std::vector<std::string> emits = {};
};

VerificationResult renamed(VerificationResult r, const std::string& name) {
  r.name = name;
  return r;
}

std::vector<Check> build_checks(std::size_t n) {
  std::vector<Check> checks;
  auto single = [&](std::string name, Tier tier, std::function<VerificationResult(std::uint64_t)> fn) {
    checks.push_back({name, tier, [name, fn](std::uint64_t s) {
                        return std::vector<VerificationResult>{renamed(fn(s), name)};
                      }});
  };
  const auto cov = [](const Eigen::MatrixXd& m) { return CovarianceMatrix::validate(m); };

  single("monomial.equal.rho0.9", Tier::theorem, [=](std::uint64_t s) {
    return verify_monomial_theorem(MonomialForm({1, 1}), cov(correlation2(0.9)), n, s);
  });
  single("monomial.alpha2-3.rho-0.6", Tier::theorem, [=](std::uint64_t s) {
    return verify_monomial_theorem(MonomialForm({2, 3}), cov(correlation2(-0.6)), n, s);
  });
  single("monomial.diagonal.2-5", Tier::theorem, [=](std::uint64_t s) {
    Eigen::MatrixXd d = Eigen::Vector2d(2.0, 5.0).asDiagonal();
    return verify_monomial_theorem(MonomialForm({1, 1}), cov(d), n, s);
  });
  single("cauchy.k1", Tier::theorem, [=](std::uint64_t s) {
    const double p[] = {1.0};
    return verify_cauchy(p, cov(Eigen::MatrixXd::Identity(1, 1)), n, s);
  });
  single("cauchy.k2", Tier::theorem, [=](std::uint64_t s) {
    const double p[] = {0.3, 0.7};
    return verify_cauchy(p, cov(correlation2(0.5)), n, s);
  });
  single("reciprocal.k2", Tier::theorem, [=](std::uint64_t s) {
    const double p[] = {0.5, 0.5};
    return verify_reciprocal(p, cov(correlation2(0.8)), n, s);
  });
  single("reciprocal.diagonal.k3", Tier::theorem, [=](std::uint64_t s) {
    const double p[] = {0.2, 0.3, 0.5};
    Eigen::MatrixXd d = Eigen::Vector3d(1.0, 3.0, 0.5).asDiagonal();
    return verify_reciprocal(p, cov(d), n, s);
  });
  for (double rho : {0.0, 0.5, 0.8}) {
    single("counterexample.mean.rho" + fmt(rho), Tier::theorem,
           [=](std::uint64_t s) { return counterexample_negative_weights(rho, n, s); });
  }
  single("counterexample.law-differs.rho0.8", Tier::theorem,
         [=](std::uint64_t s) { return counterexample_law_differs(0.8, n, s); });

  const std::size_t n_path = std::min<std::size_t>(n, 100'000);
  for (double c : {-4.0, 2.5}) {
    single(c == -4.0 ? "invariance.scale.exact" : "invariance.scale.general", Tier::theorem,
           [=](std::uint64_t s) {
             Eigen::MatrixXd sig(3, 3);
             sig << 2, 0.3, -0.2, 0.3, 1, 0.4, -0.2, 0.4, 1.5;
             const HomogeneousPolynomial f({{1.0, {2, 1, 0}}, {-0.5, {0, 1, 2}}, {2.0, {1, 1, 1}}});
             return verify_scale_invariance(f, cov(sig), c, n_path, s);
           });
  }
  single("invariance.linear", Tier::theorem, [=](std::uint64_t s) {
    Eigen::MatrixXd sig(3, 3);
    sig << 2, 0.3, -0.2, 0.3, 1, 0.4, -0.2, 0.4, 1.5;
    Eigen::MatrixXd b(3, 3);
    b << 1.0, 0.5, 0.0, -0.3, 2.0, 0.1, 0.2, 0.0, 0.8;
    const HomogeneousPolynomial f({{1.0, {2, 1, 0}}, {-0.5, {0, 1, 2}}, {2.0, {1, 1, 1}}});
    return verify_linear_invariance(f, cov(sig), b, n_path, s);
  });

  for (auto [k1, k2] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 1}}) {
    single("beta." + std::to_string(k1) + "-" + std::to_string(k2), Tier::theorem,
           [=](std::uint64_t s) { return verify_beta_representation(k1, k2, n, s); });
  }
  single("beta.2-2.tetrad-cdf", Tier::theorem, [=](std::uint64_t s) {
    const std::vector<double> l = {1, 1, -1, -1};
    const double d = ks_distance(sample_canonical(l, n, s), LimitLaw{TetradSingular{}});
    return make_result("", Tier::theorem, d, kKs, n, s);
  });
  single("beta.1-1.quarter-chisq", Tier::theorem, [=](std::uint64_t s) {
    const std::vector<double> l = {1, -1};
    const double d = ks_distance(sample_canonical(l, n, s), LimitLaw{ScaledChiSquare{0.25, 1}});
    return make_result("", Tier::theorem, d, kKs, n, s);
  });

  single("trig.c1", Tier::theorem, [=](std::uint64_t s) { return verify_trig_lemma(1.0, n, s); });
  single("trig.c0.3", Tier::theorem, [=](std::uint64_t s) { return verify_trig_lemma(0.3, n, s); });
  single("trig.negative-c", Tier::theorem,
         [=](std::uint64_t s) { return verify_trig_lemma(-0.5, n, s); });

  auto quad = [&](std::string name, Eigen::Matrix2d a, Eigen::Matrix2d sig) {
    single(std::move(name), Tier::theorem, [=](std::uint64_t s) {
      return verify_quadratic_law(QuadraticForm(a), cov(sig), n, s);
    });
  };
  quad("quadratic.factorable.diff-squares", (Eigen::Matrix2d() << 1, 0, 0, -1).finished(),
       (Eigen::Matrix2d() << 1, 0.3, 0.3, 2).finished());
  quad("quadratic.factorable.product", (Eigen::Matrix2d() << 0, 1, 1, 0).finished(),
       (Eigen::Matrix2d() << 1, -0.5, -0.5, 1).finished());
  quad("quadratic.factorable.square", (Eigen::Matrix2d() << 1, 1, 1, 1).finished(),
       (Eigen::Matrix2d() << 2, 0.4, 0.4, 1).finished());
  quad("quadratic.definite.positive", (Eigen::Matrix2d() << 2, 0.5, 0.5, 1).finished(),
       (Eigen::Matrix2d() << 1, -0.4, -0.4, 1).finished());
  quad("quadratic.definite.negative", (Eigen::Matrix2d() << -1, 0.2, 0.2, -3).finished(),
       (Eigen::Matrix2d() << 1.5, 0.6, 0.6, 1).finished());

  checks.push_back({"bounds", Tier::theorem, [=](std::uint64_t s) { return verify_bounds_suite(n, s); },
                    {"bounds.lower-nonneg", "bounds.lower-pm", "bounds.tetrad-chisq", "bounds.upper",
                     "bounds.upper-equality"}});

  single("tetrad.kronecker", Tier::theorem, [=](std::uint64_t s) {
    Eigen::MatrixXd s1(2, 2), s2(2, 2);
    s1 << 1, 0.5, 0.5, 1;
    s2 << 2, 0.3, 0.3, 1;
    const auto sig = cov(kron(s1, s2));
    const HomogeneousPolynomial f = tetrad_polynomial();
    const auto c = classify(quadratic_to_matrix(f), sig);
    if (!c.law || !(*c.law == LimitLaw{FoldedBetaProduct{2, 2}})) {
      return make_result("", Tier::theorem, std::numeric_limits<double>::infinity(), kKs, n, s);
    }
    const double d = ks_distance(sample_wald(f, sig, config(n, s, 1)), LimitLaw{TetradSingular{}});
    return make_result("", Tier::theorem, d, kKs, n, s);
  });

  const std::size_t reps = std::min<std::size_t>(n, 5000);
  single("wald-normal.singular.identity", Tier::theorem, [=](std::uint64_t s) {
    return verify_prop1_convergence(Eigen::MatrixXd::Identity(4, 4), 5000, reps, s);
  });
  single("wald-normal.singular.blocks", Tier::theorem, [=](std::uint64_t s) {
    Eigen::MatrixXd th = Eigen::MatrixXd::Zero(4, 4);
    th.topLeftCorner(2, 2) = correlation2(0.7);
    th.bottomRightCorner(2, 2) = correlation2(0.7);
    return verify_prop1_convergence(th, 5000, reps, s);
  });
  single("wald-normal.regular", Tier::theorem, [=](std::uint64_t s) {
    Eigen::MatrixXd th = Eigen::MatrixXd::Identity(4, 4);
    th(0, 2) = th(2, 0) = 0.5;
    return verify_prop1_convergence(th, 5000, reps, s);
  });

  single("stable.convolution", Tier::theorem,
         [=](std::uint64_t s) { return verify_stable_convolution(0.7, 1.8, n, s); });

  const std::vector<double> phis = {0.0, 0.3, 0.7, 1.2, 1.5};
  const std::vector<int> ms = {1, 2, 3, 4};
  for (double sigma : {0.4, 1.0, 2.5}) {
    single("moments.invariance.sigma" + fmt(sigma), Tier::theorem,
           [=](std::uint64_t) { return verify_moment_invariance(sigma, phis, ms); });
  }
  single("moments.doubled-angle", Tier::theorem,
         [=](std::uint64_t s) { return verify_doubled_angle(0.4, 0.7, n_path, s); });
  single("moments.sampler", Tier::theorem,
         [=](std::uint64_t s) { return verify_moment_sampler(2.5, 0.7, n, s); });

  for (int k : {3, 4, 5}) {
    const std::string suffix = ".k" + std::to_string(k);
    single("conjecture.monomial" + suffix, Tier::conjecture, [=](std::uint64_t s) {
      std::vector<double> alpha = {1.0, 1.0, 1.0, 0.5, 2.0};
      if (k == 4) alpha = {0.5, 1.0, 2.0, 1.5};
      alpha.resize(static_cast<std::size_t>(k));
      return verify_conjecture_monomial(MonomialForm(alpha), cov(random_correlation(k, s)), n, s);
    });
    single("conjecture.cauchy" + suffix, Tier::conjecture, [=](std::uint64_t s) {
      std::vector<double> p(static_cast<std::size_t>(k), 1.0 / k);
      return verify_cauchy(p, cov(random_correlation(k, s)), n, s);
    });
    single("conjecture.reciprocal" + suffix, Tier::conjecture, [=](std::uint64_t s) {
      std::vector<double> p(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) p[static_cast<std::size_t>(i)] = (i + 1.0) / (k * (k + 1) / 2.0);
      return verify_reciprocal(p, cov(random_correlation(k, s)), n, s);
    });
  }
  return checks;
}

}  // namespace

std::vector<VerificationResult> run_suite(Suite suite, std::size_t n, std::uint64_t seed,
                                          unsigned threads) {
  if (n < 1000) throw std::invalid_argument("verify needs n >= 1000");
  std::vector<Check> checks;
  for (auto& c : build_checks(n)) {
    if (suite == Suite::all || (suite == Suite::theorems) == (c.tier == Tier::theorem)) {
      checks.push_back(std::move(c));
    }
  }
  std::vector<std::vector<VerificationResult>> results(checks.size());
  for_each_batch(checks.size(), threads, [&](std::size_t i) {
    results[i] = checks[i].run(check_seed(seed, checks[i].name));
  });
  std::vector<VerificationResult> flat;
  for (auto& r : results) flat.insert(flat.end(), r.begin(), r.end());
  std::sort(flat.begin(), flat.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return flat;
}

std::vector<std::string> suite_check_names() {
  std::vector<std::string> names;
  for (const auto& c : build_checks(1000)) {
    if (c.emits.empty()) names.push_back(c.name);
    names.insert(names.end(), c.emits.begin(), c.emits.end());
  }
  std::sort(names.begin(), names.end());
  return names;
}

const std::vector<CoverageItem>& coverage_manifest() {
  static const std::vector<CoverageItem> items = {
      {"equal-exponent bivariate monomial", {"monomial.equal"}},
      {"bivariate monomial with arbitrary exponents", {"monomial.alpha2-3", "monomial.diagonal"}},
      {"bivariate Cauchy ratio", {"cauchy.k2", "cauchy.k1"}},
      {"pathwise invariance under scaling and linear maps", {"invariance.scale", "invariance.linear"}},
      {"folded-Beta representation of +-1 spectra", {"beta."}},
      {"trigonometric lemma, including negative c", {"trig.c", "trig.negative-c"}},
      {"bivariate quadratic classification", {"quadratic.factorable", "quadratic.definite"}},
      {"Cauchy-Schwarz upper bound", {"bounds.upper"}},
      {"lower bound for one-signed spectra", {"bounds.lower-nonneg"}},
      {"lower bound for +-1 spectra", {"bounds.lower-pm"}},
      {"tetrad limit under Kronecker covariance", {"tetrad.kronecker"}},
      {"tetrad law dominated by chi-square(1)", {"bounds.tetrad-chisq"}},
      {"finite-sample convergence of the tetrad statistic", {"wald-normal."}},
      {"monomial conjecture evidence", {"conjecture.monomial"}},
      {"Cauchy conjecture evidence", {"conjecture.cauchy"}},
      {"reciprocal conjecture evidence", {"conjecture.reciprocal"}},
      {"stable convolution rule", {"stable.convolution"}},
      {"moment invariance of the angular function", {"moments."}},
  };
  return items;
}

std::string format_report(const std::vector<VerificationResult>& results) {
  std::string out = "name\ttier\tstatistic\tthreshold\tpass\tn\tseed\n";
  char buf[512];
  for (const auto& r : results) {
    std::snprintf(buf, sizeof buf, "%s\t%s\t%.9g\t%.9g\t%s\t%zu\t%llu\n", r.name.c_str(),
                  tier_name(r.tier), r.statistic, r.threshold, r.pass ? "pass" : "fail", r.n_used,
                  static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

bool theorems_pass(const std::vector<VerificationResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const auto& r) { return r.tier == Tier::conjecture || r.pass; });
}

}  // namespace wald
