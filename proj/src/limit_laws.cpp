#include "wald/limit_laws.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "wald/parallel.hpp"
#include "wald/special.hpp"
#include "wald/text_io.hpp"

namespace wald {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double mix_cdf(const TwoChiSquareMix& m, double t) {
  if (m.w2 == 0.0) return special::chisq_cdf(1.0, t / m.w1);
  // With z = a sin(theta), a = sqrt(t / w2), the inner chi^2_1 argument
  // (t - w2 z^2) / w1 becomes t cos^2(theta) / w1 and the integrand is smooth.
  const double a = std::sqrt(t / m.w2);
  const double c = std::sqrt(t / (2.0 * m.w1));
  auto integrand = [&](double theta) {
    const double ct = std::cos(theta);
    return std::erf(c * ct) * special::normal_pdf(a * std::sin(theta)) * a * ct;
  };
  const double v = 2.0 * special::integrate(integrand, 0.0, 0.5 * std::numbers::pi, 1e-12);
  return std::clamp(v, 0.0, 1.0);
}

double folded_beta_cdf(const FoldedBetaProduct& f, double t) {
  const double k = f.k1 + f.k2;
  const double a = 0.5 * f.k1;
  const double b = 0.5 * f.k2;
  // u = sin^2(theta) turns the Beta density into the smooth weight
  // 2 sin^(2a-1) cos^(2b-1) / B(a, b). With theta = pi/4 - psi/2 the fold
  // |2u - 1| is |sin psi|, exact to full relative precision near 0.
  const double norm = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b));
  const double q = 0.25 * std::numbers::pi;
  auto integrand = [&](double psi) {
    const double theta = q - 0.5 * psi;
    const double sp = std::sin(psi);
    const double s2 = sp * sp;
    const double inner = s2 == 0.0 ? 1.0 : special::chisq_cdf(k, 4.0 * t / s2);
    return inner * norm * std::pow(std::sin(theta), 2.0 * a - 1.0) *
           std::pow(std::cos(theta), 2.0 * b - 1.0);
  };
  // The inner cdf switches from 0 to 1 around |s| = sqrt(4t/k), which is
  // narrow for small t; break the range on a geometric ladder from
  // just below it out to 1 (the tail above it decays only like 1/s for k = 1).
  const double s_star = std::sqrt(4.0 * t / k);
  std::vector<double> cuts{-2.0 * q, 0.0, 2.0 * q};
  for (double sv = s_star / 64.0; sv < 1.0; sv *= 8.0) {
    cuts.push_back(std::asin(sv));
    cuts.push_back(-std::asin(sv));
  }
  std::sort(cuts.begin(), cuts.end());
  double v = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) v += special::integrate(integrand, cuts[i], cuts[i + 1], 1e-12);
  }
  return std::clamp(v, 0.0, 1.0);
}

double nominal_scale(const LimitLaw& law) {
  return std::visit(overloaded{
                        [](const ScaledChiSquare& s) { return s.scale * s.df; },
                        [](const TwoChiSquareMix& m) { return m.w1 + m.w2; },
                        [](const TetradSingular&) { return 1.0; },
                        [](const FoldedBetaProduct& f) { return 0.25 * (f.k1 + f.k2); },
                        [](const Empirical& e) { return e.samples->values().back(); },
                    },
                    law);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  for (;;) {
    const auto next = s.find(sep, pos);
    out.emplace_back(s.substr(pos, next == std::string_view::npos ? s.size() - pos : next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

void validate(const LimitLaw& law) {
  std::visit(overloaded{
                 [](const ScaledChiSquare& s) {
                   if (!(s.scale > 0) || !std::isfinite(s.scale) || s.df < 1) {
                     throw std::invalid_argument("scaled-chisq needs scale > 0 and df >= 1");
                   }
                 },
                 [](const TwoChiSquareMix& m) {
                   if (!(m.w1 > 0) || !(m.w2 >= 0) || !std::isfinite(m.w1) ||
                       !std::isfinite(m.w2)) {
                     throw std::invalid_argument("mix2 needs w1 > 0 and w2 >= 0");
                   }
                 },
                 [](const TetradSingular&) {},
                 [](const FoldedBetaProduct& f) {
                   if (f.k1 < 1 || f.k2 < 1) {
                     throw std::invalid_argument("beta-fold needs k1, k2 >= 1");
                   }
                 },
                 [](const Empirical& e) {
                   if (!e.samples) throw std::invalid_argument("empirical law has no samples");
                 },
             },
             law);
}

double tetrad_singular_sf(double t) {
  if (!(t > 0)) return 1.0;
  if (std::isinf(t)) return 0.0;
  const double v = std::exp(-2.0 * t) -
                   std::sqrt(2.0 * std::numbers::pi * t) * 0.5 * std::erfc(std::sqrt(2.0 * t));
  return std::clamp(v, 0.0, 1.0);
}

double tetrad_singular_cdf(double t) {
  if (!(t > 0)) return 0.0;
  // Past t = 1 the survival form keeps the cdf monotone near 1; below it the
  // direct sum of positive terms keeps relative accuracy near 0.
  if (t > 1.0) return 1.0 - tetrad_singular_sf(t);
  // 1 - Phi(2 sqrt(t)) = erfc(sqrt(2t)) / 2
  const double v = -std::expm1(-2.0 * t) +
                   std::sqrt(2.0 * std::numbers::pi * t) * 0.5 * std::erfc(std::sqrt(2.0 * t));
  return std::min(v, 1.0);
}

double cdf(const LimitLaw& law, double t) {
  validate(law);
  if (std::isnan(t)) throw std::domain_error("cdf: t is NaN");
  return std::visit(overloaded{
                        [t](const ScaledChiSquare& s) { return special::chisq_cdf(s.df, t / s.scale); },
                        [t](const TwoChiSquareMix& m) { return t <= 0 ? 0.0 : mix_cdf(m, t); },
                        [t](const TetradSingular&) { return tetrad_singular_cdf(t); },
                        [t](const FoldedBetaProduct& f) {
                          return t <= 0 ? 0.0 : folded_beta_cdf(f, t);
                        },
                        [t](const Empirical& e) { return e.samples->cdf(t); },
                    },
                    law);
}

double quantile(const LimitLaw& law, double p) {
  validate(law);
  if (!(p > 0 && p < 1)) throw std::domain_error("quantile: p must lie in (0, 1)");
  if (const auto* e = std::get_if<Empirical>(&law)) return e->samples->quantile(p);
  if (const auto* s = std::get_if<ScaledChiSquare>(&law)) {
    return s->scale * special::chisq_quantile(s->df, p);
  }
  auto f = [&law](double x) { return cdf(law, x); };
  double hi = 50.0 * nominal_scale(law);
  while (f(hi) <= p) hi *= 2.0;
  return special::invert_increasing(f, p, 0.0, hi, 1e-15);
}

EmpiricalDistribution sample_law(const LimitLaw& law, std::size_t n, std::uint64_t seed,
                                 unsigned threads) {
  validate(law);
  if (n < 2) throw std::invalid_argument("sample_law needs n >= 2");
  if (std::holds_alternative<Empirical>(law)) {
    throw std::invalid_argument("an empirical law cannot be resampled");
  }
  auto values = fill_batched(n, kDefaultBatchSize, seed, threads, [&law](Rng& rng, std::span<double> out) {
    std::visit(overloaded{
                   [&](const ScaledChiSquare& s) {
                     for (double& v : out) v = s.scale * rng.chi_square(s.df);
                   },
                   [&](const TwoChiSquareMix& m) {
                     for (double& v : out) {
                       const double z1 = rng.normal();
                       const double z2 = rng.normal();
                       v = m.w1 * z1 * z1 + m.w2 * z2 * z2;
                     }
                   },
                   [&](const TetradSingular&) {
                     for (double& v : out) {
                       const double r2 = rng.chi_square(4.0);
                       const double u = rng.uniform();
                       v = 0.25 * r2 * u * u;
                     }
                   },
                   [&](const FoldedBetaProduct& f) {
                     const double k = f.k1 + f.k2;
                     for (double& v : out) {
                       const double r2 = rng.chi_square(k);
                       const double b = rng.beta(0.5 * f.k1, 0.5 * f.k2);
                       const double s = 2.0 * b - 1.0;
                       v = 0.25 * r2 * s * s;
                     }
                   },
                   [](const Empirical&) {},
               },
               law);
  });
  return EmpiricalDistribution(std::move(values));
}

LimitLaw monomial_law(const MonomialForm& m) {
  const double s = m.total_degree();
  return ScaledChiSquare{1.0 / (s * s), 1};
}

double stable_density(double alpha, double x) {
  if (!(alpha > 0) || !(x > 0)) throw std::domain_error("stable_density needs alpha, x > 0");
  return alpha / std::sqrt(2.0 * std::numbers::pi) * std::pow(x, -1.5) *
         std::exp(-0.5 * alpha * alpha / x);
}

double stable_cdf(double alpha, double x) {
  if (!(alpha > 0)) throw std::domain_error("stable_cdf needs alpha > 0");
  if (!(x > 0)) return 0.0;
  return std::erfc(alpha / std::sqrt(2.0 * x));
}

double cauchy_cdf(double t) { return 0.5 + std::atan(t) / std::numbers::pi; }

double inverse_chisq1_cdf(double t) {
  if (!(t > 0)) return 0.0;
  return std::erfc(1.0 / std::sqrt(2.0 * t));
}

std::string law_spec(const LimitLaw& law) {
  return std::visit(overloaded{
                        [](const ScaledChiSquare& s) {
                          return "scaled-chisq:" + format_real(s.scale) + ":" + std::to_string(s.df);
                        },
                        [](const TwoChiSquareMix& m) {
                          return "mix2:" + format_real(m.w1) + ":" + format_real(m.w2);
                        },
                        [](const TetradSingular&) { return std::string("tetrad"); },
                        [](const FoldedBetaProduct& f) {
                          return "beta-fold:" + std::to_string(f.k1) + ":" + std::to_string(f.k2);
                        },
                        [](const Empirical&) { return std::string("empirical"); },
                    },
                    law);
}

LimitLaw parse_law(std::string_view spec) {
  const auto parts = split(spec, ':');
  auto real_at = [&](std::size_t i) {
    try {
      return parse_real(parts[i], 0);
    } catch (const ParseError&) {
      throw std::invalid_argument("bad number '" + parts[i] + "' in law spec '" +
                                  std::string(spec) + "'");
    }
  };
  auto int_at = [&](std::size_t i) {
    try {
      return static_cast<int>(parse_integer(parts[i], 0));
    } catch (const ParseError&) {
      throw std::invalid_argument("bad integer '" + parts[i] + "' in law spec '" +
                                  std::string(spec) + "'");
    }
  };
  LimitLaw law;
  const auto& name = parts[0];
  if (name == "scaled-chisq" && parts.size() == 3) {
    law = ScaledChiSquare{real_at(1), int_at(2)};
  } else if (name == "chisq" && parts.size() == 2) {
    law = ScaledChiSquare{1.0, int_at(1)};
  } else if (name == "mix2" && parts.size() == 3) {
    law = TwoChiSquareMix{real_at(1), real_at(2)};
  } else if (name == "tetrad" && parts.size() == 1) {
    law = TetradSingular{};
  } else if (name == "beta-fold" && parts.size() == 3) {
    law = FoldedBetaProduct{int_at(1), int_at(2)};
  } else {
    throw std::invalid_argument(
        "unknown law spec '" + std::string(spec) +
        "' (expected scaled-chisq:S:DF, chisq:DF, mix2:W1:W2, tetrad, beta-fold:K1:K2)");
  }
  validate(law);
  return law;
}

}  // namespace wald
