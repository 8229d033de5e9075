#include "wald/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "wald/text_io.hpp"

namespace wald {
namespace {

double ipow(double x, int e) {
  double r = 1.0;
  for (; e > 0; --e) r *= x;
  return r;
}

void check_dimension(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw std::invalid_argument("dimension mismatch: polynomial has " +
                                std::to_string(expected) + " variables, point has " +
                                std::to_string(got));
  }
}

using TermMap = std::map<std::vector<int>, double, std::greater<>>;

std::vector<Term> to_terms(const TermMap& m) {
  std::vector<Term> out;
  out.reserve(m.size());
  for (const auto& [e, c] : m) out.push_back({c, e});
  return out;
}

}  // namespace

HomogeneousPolynomial::HomogeneousPolynomial(std::vector<Term> terms) {
  if (terms.empty()) throw std::invalid_argument("polynomial has no terms");
  dimension_ = terms.front().exponents.size();
  if (dimension_ == 0) throw std::invalid_argument("polynomial has no variables");
  TermMap merged;
  for (const auto& t : terms) {
    if (t.exponents.size() != dimension_) {
      throw std::invalid_argument("terms have different numbers of variables");
    }
    if (!std::isfinite(t.coeff)) throw std::invalid_argument("non-finite coefficient");
    for (int e : t.exponents) {
      if (e < 0) throw std::invalid_argument("negative exponent");
    }
    merged[t.exponents] += t.coeff;
  }
  std::erase_if(merged, [](const auto& kv) { return kv.second == 0.0; });
  if (merged.empty()) throw std::invalid_argument("polynomial is identically zero");
  terms_ = to_terms(merged);
  auto total = [](const Term& t) {
    int s = 0;
    for (int e : t.exponents) s += e;
    return s;
  };
  degree_ = total(terms_.front());
  for (const auto& t : terms_) {
    if (total(t) != degree_) throw std::invalid_argument("polynomial is not homogeneous");
  }
  if (degree_ < 1) throw std::invalid_argument("polynomial must have degree >= 1");
}

double HomogeneousPolynomial::eval(std::span<const double> x) const {
  check_dimension(dimension_, x.size());
  double sum = 0.0;
  for (const auto& t : terms_) {
    double p = t.coeff;
    for (std::size_t i = 0; i < dimension_; ++i) p *= ipow(x[i], t.exponents[i]);
    sum += p;
  }
  return sum;
}

double HomogeneousPolynomial::eval_with_gradient(std::span<const double> x,
                                                 std::span<double> grad) const {
  check_dimension(dimension_, x.size());
  check_dimension(dimension_, grad.size());
  std::fill(grad.begin(), grad.end(), 0.0);
  double sum = 0.0;
  double powers[16];
  std::vector<double> heap;
  double* pw = powers;
  if (dimension_ > 16) {
    heap.resize(dimension_);
    pw = heap.data();
  }
  for (const auto& t : terms_) {
    double p = t.coeff;
    for (std::size_t i = 0; i < dimension_; ++i) {
      pw[i] = ipow(x[i], t.exponents[i]);
      p *= pw[i];
    }
    sum += p;
    for (std::size_t i = 0; i < dimension_; ++i) {
      const int e = t.exponents[i];
      if (e == 0) continue;
      double d = t.coeff * e * ipow(x[i], e - 1);
      for (std::size_t j = 0; j < dimension_; ++j) {
        if (j != i) d *= pw[j];
      }
      grad[i] += d;
    }
  }
  return sum;
}

std::vector<double> HomogeneousPolynomial::gradient(std::span<const double> x) const {
  std::vector<double> g(dimension_);
  eval_with_gradient(x, g);
  return g;
}

HomogeneousPolynomial HomogeneousPolynomial::scale(double c) const {
  if (c == 0.0 || !std::isfinite(c)) {
    throw std::invalid_argument("scale factor must be a nonzero finite real");
  }
  std::vector<Term> t = terms_;
  for (auto& term : t) term.coeff *= c;
  return HomogeneousPolynomial(std::move(t));
}

HomogeneousPolynomial HomogeneousPolynomial::compose_linear(const Eigen::MatrixXd& b) const {
  const auto k = static_cast<Eigen::Index>(dimension_);
  if (b.rows() != k || b.cols() != k) {
    throw std::invalid_argument("compose_linear: matrix must be " + std::to_string(k) + "x" +
                                std::to_string(k));
  }
  const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues()(0);
  const double det = b.fullPivLu().determinant();
  if (!(std::abs(det) >= 1e-12 * std::pow(norm, static_cast<double>(k))) || norm == 0.0) {
    throw std::invalid_argument("compose_linear: matrix is singular");
  }

  TermMap result;
  for (const auto& t : terms_) {
    TermMap acc;
    acc[std::vector<int>(dimension_, 0)] = t.coeff;
    for (std::size_t i = 0; i < dimension_; ++i) {
      // multiply by (B x)_i = sum_j b(i, j) x_j, e_i times
      for (int rep = 0; rep < t.exponents[i]; ++rep) {
        TermMap next;
        for (const auto& [e, c] : acc) {
          for (std::size_t j = 0; j < dimension_; ++j) {
            const double bij = b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            if (bij == 0.0) continue;
            auto e2 = e;
            ++e2[j];
            next[e2] += c * bij;
          }
        }
        acc = std::move(next);
      }
    }
    for (const auto& [e, c] : acc) result[e] += c;
  }
  double max_abs = 0.0;
  for (const auto& kv : result) max_abs = std::max(max_abs, std::abs(kv.second));
  std::erase_if(result, [&](const auto& kv) { return std::abs(kv.second) <= 1e-14 * max_abs; });
  if (result.empty()) throw std::domain_error("compose_linear: result vanished");
  return HomogeneousPolynomial(to_terms(result));
}

HomogeneousPolynomial HomogeneousPolynomial::restrict_leading(std::size_t m) const {
  if (m == 0 || m > dimension_) throw std::invalid_argument("restrict_leading: bad m");
  std::vector<Term> kept;
  for (const auto& t : terms_) {
    const bool uses_tail =
        std::any_of(t.exponents.begin() + static_cast<std::ptrdiff_t>(m), t.exponents.end(),
                    [](int e) { return e != 0; });
    if (uses_tail) continue;
    kept.push_back({t.coeff, std::vector<int>(t.exponents.begin(),
                                              t.exponents.begin() + static_cast<std::ptrdiff_t>(m))});
  }
  if (kept.empty()) {
    throw std::domain_error("polynomial vanishes on the support of the covariance matrix");
  }
  return HomogeneousPolynomial(std::move(kept));
}

MonomialForm::MonomialForm(std::vector<double> exponents) : exponents_(std::move(exponents)) {
  if (exponents_.empty()) throw std::invalid_argument("monomial needs at least one exponent");
  for (double a : exponents_) {
    if (!(a > 0) || !std::isfinite(a)) {
      throw std::invalid_argument("monomial exponents must be positive and finite");
    }
  }
}

double MonomialForm::total_degree() const noexcept {
  double s = 0.0;
  for (double a : exponents_) s += a;
  return s;
}

double MonomialForm::eval(std::span<const double> x) const {
  check_dimension(exponents_.size(), x.size());
  double p = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) p *= std::pow(std::abs(x[i]), exponents_[i]);
  return p;
}

std::vector<double> MonomialForm::gradient(std::span<const double> x) const {
  const double f = eval(x);
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) throw std::domain_error("monomial gradient undefined at a zero coordinate");
    g[i] = exponents_[i] * f / x[i];
  }
  return g;
}

QuadraticForm::QuadraticForm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("quadratic form matrix must be square and nonempty");
  }
  a_ = a.triangularView<Eigen::Upper>();
  a_.triangularView<Eigen::StrictlyLower>() = a_.transpose().triangularView<Eigen::StrictlyLower>();
  if (!a_.allFinite()) throw std::invalid_argument("quadratic form has non-finite entries");
  if (a_.isZero(0.0)) throw std::invalid_argument("quadratic form is zero");
}

HomogeneousPolynomial QuadraticForm::to_polynomial() const {
  const auto k = static_cast<std::size_t>(a_.rows());
  std::vector<Term> terms;
  for (Eigen::Index i = 0; i < a_.rows(); ++i) {
    for (Eigen::Index j = i; j < a_.cols(); ++j) {
      const double c = i == j ? a_(i, i) : 2.0 * a_(i, j);
      if (c == 0.0) continue;
      std::vector<int> e(k, 0);
      ++e[static_cast<std::size_t>(i)];
      ++e[static_cast<std::size_t>(j)];
      terms.push_back({c, std::move(e)});
    }
  }
  return HomogeneousPolynomial(std::move(terms));
}

QuadraticForm quadratic_to_matrix(const HomogeneousPolynomial& f) {
  if (f.degree() != 2) {
    throw std::invalid_argument("quadratic_to_matrix: degree is " + std::to_string(f.degree()));
  }
  const auto k = static_cast<Eigen::Index>(f.dimension());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k, k);
  for (const auto& t : f.terms()) {
    Eigen::Index first = -1;
    Eigen::Index second = -1;
    for (Eigen::Index i = 0; i < k; ++i) {
      const int e = t.exponents[static_cast<std::size_t>(i)];
      if (e == 2) first = second = i;
      if (e == 1) (first < 0 ? first : second) = i;
    }
    if (first == second) {
      a(first, first) = t.coeff;
    } else {
      a(first, second) = a(second, first) = 0.5 * t.coeff;
    }
  }
  return QuadraticForm(a);
}

HomogeneousPolynomial tetrad_polynomial() {
  return HomogeneousPolynomial({{1.0, {1, 0, 0, 1}}, {-1.0, {0, 1, 1, 0}}});
}

HomogeneousPolynomial parse_polynomial(const std::string& text) {
  const auto lines = tokenize(text);
  if (lines.empty()) throw ParseError("polynomial file has no terms");
  const std::size_t k = lines.front().tokens.size() - 1;
  if (k == 0) throw ParseError(lines.front().line, "term needs a coefficient and exponents");
  std::vector<Term> terms;
  for (const auto& l : lines) {
    if (l.tokens.size() != k + 1) {
      throw ParseError(l.line, "expected " + std::to_string(k) + " exponents, found " +
                                   std::to_string(l.tokens.size() - 1));
    }
    Term t;
    t.coeff = parse_real(l.tokens[0], l.line);
    int total = 0;
    for (std::size_t i = 1; i <= k; ++i) {
      const long e = parse_integer(l.tokens[i], l.line);
      if (e < 0 || e > 1000) throw ParseError(l.line, "exponent out of range");
      t.exponents.push_back(static_cast<int>(e));
      total += static_cast<int>(e);
    }
    if (!terms.empty()) {
      int first_total = 0;
      for (int e : terms.front().exponents) first_total += e;
      if (total != first_total) {
        throw ParseError(l.line, "term has degree " + std::to_string(total) + ", expected " +
                                     std::to_string(first_total) + " (not homogeneous)");
      }
    }
    terms.push_back(std::move(t));
  }
  try {
    return HomogeneousPolynomial(std::move(terms));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

HomogeneousPolynomial read_polynomial_file(const std::string& path) {
  try {
    return parse_polynomial(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_polynomial(const HomogeneousPolynomial& f) {
  std::string out;
  for (const auto& t : f.terms()) {
    out += format_real(t.coeff);
    for (int e : t.exponents) out += ' ' + std::to_string(e);
    out += '\n';
  }
  return out;
}

}  // namespace wald
