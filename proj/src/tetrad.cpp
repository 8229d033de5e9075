#include "wald/tetrad.hpp"

#include <algorithm>
#include <cmath>

#include "wald/limit_laws.hpp"
#include "wald/special.hpp"
#include "wald/text_io.hpp"

namespace wald {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

bool looks_numeric(const std::string& field) {
  try {
    parse_real(field, 0);
    return true;
  } catch (const ParseError&) {
    return false;
  }
}

}  // namespace

DataMatrix::DataMatrix(Eigen::MatrixXd values, std::vector<std::string> names)
    : values_(std::move(values)), names_(std::move(names)) {
  if (values_.cols() < 4) throw std::invalid_argument("data must have at least 4 columns");
  if (values_.rows() < values_.cols() + 1) {
    throw std::invalid_argument("data needs at least p + 1 = " + std::to_string(values_.cols() + 1) +
                                " rows, got " + std::to_string(values_.rows()));
  }
  if (!values_.allFinite()) throw std::invalid_argument("data contains non-finite entries");
  if (!names_.empty() && names_.size() != static_cast<std::size_t>(values_.cols())) {
    throw std::invalid_argument("column name count does not match the number of columns");
  }
}

DataMatrix parse_csv(const std::string& text) {
  std::vector<std::string> names;
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string_view line(text.data() + pos,
                                (nl == std::string::npos ? text.size() : nl) - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (trim(line).empty() || trim(line).front() == '#') continue;
    auto fields = split_fields(line);
    if (rows.empty() && names.empty() && !looks_numeric(fields.front())) {
      names = std::move(fields);
      continue;
    }
    const std::size_t width = !rows.empty() ? rows.front().size() : !names.empty() ? names.size() : fields.size();
    if (fields.size() != width) {
      throw ParseError(line_no, "expected " + std::to_string(width) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_real(f, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  return DataMatrix(std::move(m), std::move(names));
}

DataMatrix read_csv(const std::string& path) {
  try {
    return parse_csv(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void TetradIndex::validate(Eigen::Index p) const {
  const int v[4] = {i, j, k, l};
  for (int a = 0; a < 4; ++a) {
    if (v[a] < 0 || v[a] >= p) {
      throw std::invalid_argument("tetrad index " + std::to_string(v[a]) + " out of range [0, " +
                                  std::to_string(p) + ")");
    }
    for (int b = 0; b < a; ++b) {
      if (v[a] == v[b]) throw std::invalid_argument("tetrad indices must be distinct");
    }
  }
}

std::array<std::pair<int, int>, 4> TetradIndex::pairs() const {
  return {{{i, k}, {i, l}, {j, k}, {j, l}}};
}

std::vector<TetradIndex> all_tetrads(int p) {
  std::vector<TetradIndex> out;
  for (int a = 0; a < p; ++a)
    for (int b = a + 1; b < p; ++b)
      for (int c = b + 1; c < p; ++c)
        for (int d = c + 1; d < p; ++d) {
          out.push_back({a, b, c, d});
          out.push_back({a, c, b, d});
          out.push_back({a, d, b, c});
        }
  return out;
}

Eigen::MatrixXd empirical_covariance(const Eigen::MatrixXd& rows) {
  if (rows.rows() < 2) throw std::invalid_argument("empirical_covariance: need at least 2 rows");
  if (!rows.allFinite()) throw std::invalid_argument("empirical_covariance: non-finite data");
  const Eigen::RowVectorXd mean = rows.colwise().mean();
  const Eigen::MatrixXd centered = rows.rowwise() - mean;
  Eigen::MatrixXd theta = (centered.transpose() * centered) / static_cast<double>(rows.rows());
  return theta.selfadjointView<Eigen::Lower>();
}

Eigen::MatrixXd empirical_covariance(const DataMatrix& data) {
  return empirical_covariance(data.values());
}

TetradStat tetrad_stat(const Eigen::MatrixXd& theta, const TetradIndex& idx) {
  if (theta.rows() != theta.cols()) throw std::invalid_argument("tetrad_stat: theta must be square");
  idx.validate(theta.rows());
  const double ik = theta(idx.i, idx.k);
  const double il = theta(idx.i, idx.l);
  const double jk = theta(idx.j, idx.k);
  const double jl = theta(idx.j, idx.l);
  return {ik * jl - il * jk, {jl, -jk, -il, ik}};
}

Eigen::MatrixXd asymptotic_v_normal(const Eigen::MatrixXd& theta,
                                    std::span<const std::pair<int, int>> pairs) {
  const auto m = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd v(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto [i, j] = pairs[static_cast<std::size_t>(a)];
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto [k, l] = pairs[static_cast<std::size_t>(b)];
      v(a, b) = theta(i, k) * theta(j, l) + theta(i, l) * theta(j, k);
    }
  }
  return v;
}

const char* regime_name(Regime r) { return r == Regime::regular ? "regular" : "near_singular"; }

WaldReport wald_tetrad_test(const Eigen::MatrixXd& theta_hat, Eigen::Index n,
                            const TetradIndex& idx) {
  if (n <= 4) throw std::invalid_argument("wald_tetrad_test: need n > 4");
  const TetradStat s = tetrad_stat(theta_hat, idx);
  const auto pairs = idx.pairs();
  const Eigen::MatrixXd v = asymptotic_v_normal(theta_hat, pairs);
  const Eigen::Map<const Eigen::Vector4d> g(s.gradient.data());
  const double grad2 = g.squaredNorm();
  const double denom = g.dot(v * g);
  if (!(denom > 1e-14 * grad2 * v.cwiseAbs().maxCoeff()) || !std::isfinite(denom)) {
    throw DegenerateCovarianceError(
        "estimated variance of the tetrad is zero; the covariance estimate is degenerate, "
        "collect more data");
  }
  WaldReport r;
  r.index = idx;
  r.gamma_hat = s.gamma;
  r.t_stat = static_cast<double>(n) * s.gamma * s.gamma / denom;
  r.p_regular = std::clamp(special::chisq_sf(1.0, r.t_stat), 0.0, 1.0);
  r.p_singular = tetrad_singular_sf(r.t_stat);
  r.gradient_norm = std::sqrt(grad2);
  const double nd = static_cast<double>(n);
  const double threshold = 4.0 * v.diagonal().maxCoeff() * std::sqrt(std::log(nd) / nd);
  r.regime_hint = grad2 < threshold ? Regime::near_singular : Regime::regular;
  return r;
}

WaldReport wald_tetrad_test(const DataMatrix& data, const TetradIndex& idx) {
  return wald_tetrad_test(empirical_covariance(data), data.rows(), idx);
}

}  // namespace wald
