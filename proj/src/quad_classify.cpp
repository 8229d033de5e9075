#include "wald/quad_classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "wald/parallel.hpp"
#include "wald/special.hpp"

namespace wald {
namespace {

constexpr double kZeroEigenvalue = 1e-10;
constexpr double kEqualModulus = 1e-8;

std::string format_eigenvalue(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v == 0.0 ? 0.0 : v);
  return buf;
}

const LimitLaw kQuarterChi1 = ScaledChiSquare{0.25, 1};

void apply_bivariate(QuadraticClassification& c, double l1, double l2) {
  if (l1 * l2 <= 0) {
    c.law = kQuarterChi1;
    c.rule = "bivariate-factorable";
  } else {
    const double tr = l1 + l2;
    c.law = TwoChiSquareMix{0.25, l1 * l2 / (tr * tr)};
    c.rule = "bivariate-definite";
  }
  c.lower_bound = kQuarterChi1;
}

}  // namespace

QuadraticClassification classify_spectrum(std::span<const double> eigenvalues) {
  QuadraticClassification c;
  c.eigenvalues.assign(eigenvalues.begin(), eigenvalues.end());
  std::sort(c.eigenvalues.begin(), c.eigenvalues.end(), std::greater<>());
  double max_abs = 0.0;
  for (double l : c.eigenvalues) max_abs = std::max(max_abs, std::abs(l));
  if (!(max_abs > 0) || !std::isfinite(max_abs)) {
    throw std::invalid_argument("classify: the quadratic form is zero on the support of Sigma");
  }
  std::vector<double> nz;
  for (double l : c.eigenvalues) {
    if (std::abs(l) >= kZeroEigenvalue * max_abs) nz.push_back(l);
  }
  for (double l : nz) (l > 0 ? c.positive : c.negative)++;
  const int r = static_cast<int>(nz.size());
  c.upper_bound = ScaledChiSquare{0.25, r};

  if (r == 1) {
    c.law = kQuarterChi1;
    c.lower_bound = kQuarterChi1;
    c.rule = "single-eigenvalue";
    return c;
  }
  if (r == 2) {
    apply_bivariate(c, nz[0], nz[1]);
    return c;
  }
  const bool equal_modulus = std::all_of(nz.begin(), nz.end(), [&](double l) {
    return std::abs(std::abs(l) - max_abs) <= kEqualModulus * max_abs;
  });
  const bool one_sign = c.positive == 0 || c.negative == 0;
  if (equal_modulus && one_sign) {
    c.law = ScaledChiSquare{0.25, r};
    c.rule = "equal-eigenvalues";
  } else if (equal_modulus) {
    c.law = FoldedBetaProduct{c.positive, c.negative};
    c.rule = "plus-minus-spectrum";
  } else {
    c.rule = "monte-carlo-only";
  }
  if (one_sign || equal_modulus) {
    c.lower_bound = kQuarterChi1;
  } else {
    c.conjectured_lower = true;
  }
  return c;
}

QuadraticClassification classify(const QuadraticForm& a, const CovarianceMatrix& sigma) {
  const Eigen::VectorXd ev = eigenvalues_of_product(a, sigma);
  QuadraticClassification c = classify_spectrum(std::span<const double>(ev.data(), ev.size()));
  if (a.dimension() == 2 && sigma.full_rank()) {
    // Decide on the discriminant of A itself rather than on computed eigenvalues.
    const Eigen::MatrixXd& m = a.matrix();
    const double disc = m(0, 1) * m(0, 1) - m(0, 0) * m(1, 1);
    const Eigen::Matrix2d as = m * sigma.matrix();
    if (disc >= 0) {
      c.law = kQuarterChi1;
      c.rule = "bivariate-factorable";
    } else {
      const double tr = as.trace();
      c.law = TwoChiSquareMix{0.25, as.determinant() / (tr * tr)};
      c.rule = "bivariate-definite";
    }
    c.lower_bound = kQuarterChi1;
    c.conjectured_lower = false;
  }
  return c;
}

std::string QuadraticClassification::machine_line() const {
  std::string ev;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    if (i) ev += ',';
    ev += format_eigenvalue(eigenvalues[i]);
  }
  return "law=" + (law ? law_spec(*law) : std::string("monte-carlo")) + " eigenvalues=" + ev +
         " lower=" + (lower_bound ? law_spec(*lower_bound) : std::string("none")) +
         " upper=" + law_spec(upper_bound);
}

std::string QuadraticClassification::report() const {
  std::string out;
  out += "eigenvalues of A*Sigma:";
  for (double l : eigenvalues) out += ' ' + format_eigenvalue(l);
  out += "\nsigns: " + std::to_string(positive) + " positive, " + std::to_string(negative) +
         " negative\n";
  out += "rule: " + rule + "\n";
  out += "limit law: " + (law ? law_spec(*law) : std::string("no closed form (Monte Carlo only)")) + "\n";
  out += "upper bound: " + law_spec(upper_bound) + "\n";
  if (lower_bound) {
    out += "lower bound: " + law_spec(*lower_bound) + "\n";
  } else if (conjectured_lower) {
    out += "lower bound: none proven (conjectured lower bound scaled-chisq:0.25:1)\n";
  }
  out += machine_line() + "\n";
  return out;
}

std::vector<double> draw_canonical(std::span<const double> lambdas, std::size_t n,
                                   std::uint64_t seed, unsigned threads, bool check_bound) {
  if (lambdas.empty() || std::all_of(lambdas.begin(), lambdas.end(), [](double l) { return l == 0.0; })) {
    throw std::invalid_argument("sample_canonical: eigenvalues are all zero");
  }
  const std::vector<double> lams(lambdas.begin(), lambdas.end());
  return fill_batched(n, kDefaultBatchSize, seed, threads, [&](Rng& rng, std::span<double> out) {
    for (double& v : out) {
      double num = 0.0;
      double den = 0.0;
      double norm2 = 0.0;
      for (double l : lams) {
        const double z = rng.normal();
        const double z2 = z * z;
        num += l * z2;
        den += l * l * z2;
        norm2 += z2;
      }
      v = num * num / (4.0 * den);
      if (check_bound && v > 0.25 * norm2 * (1.0 + 1e-12)) {
        throw std::logic_error("Cauchy-Schwarz bound violated by a canonical draw");
      }
    }
  });
}

EmpiricalDistribution sample_canonical(std::span<const double> lambdas, std::size_t n,
                                       std::uint64_t seed, unsigned threads, bool check_bound) {
  return EmpiricalDistribution(draw_canonical(lambdas, n, seed, threads, check_bound));
}

int k_alpha(double alpha, double max_exceedance) {
  if (!(alpha > 0 && alpha < 0.5)) throw std::domain_error("k_alpha: alpha must lie in (0, 0.5)");
  if (!(max_exceedance > 0 && max_exceedance < 1)) {
    throw std::domain_error("k_alpha: exceedance bound must lie in (0, 1)");
  }
  const double c = special::chisq_quantile(1.0, 1.0 - alpha);
  // P((1/4) chi^2_k > c) = P(chi^2_k > 4c) increases with k.
  int k = 0;
  while (k < 100000 && special::chisq_sf(k + 1, 4.0 * c) <= max_exceedance) ++k;
  return k;
}

int k_alpha(double alpha) { return k_alpha(alpha, alpha); }

}  // namespace wald
