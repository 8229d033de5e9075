// wald: sampling, limit laws, classification, tetrad tests and the
// verification suite from the command line.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wald/gaussian.hpp"
#include "wald/limit_laws.hpp"
#include "wald/parallel.hpp"
#include "wald/polynomial.hpp"
#include "wald/quad_classify.hpp"
#include "wald/tetrad.hpp"
#include "wald/text_io.hpp"
#include "wald/verify.hpp"
#include "wald/wald_sampler.hpp"

namespace {

constexpr int kExitFailedTheorem = 1;
constexpr int kExitUsage = 2;

struct Grid {
  double from = 0.0;
  double to = 0.0;
  double step = 1.0;
};

Grid parse_grid(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 3) throw std::invalid_argument("grid must look like FROM:TO:STEP");
  Grid g{wald::parse_real(parts[0], 0), wald::parse_real(parts[1], 0), wald::parse_real(parts[2], 0)};
  if (!(g.step > 0)) throw std::invalid_argument("grid step must be positive");
  if (g.to < g.from) throw std::invalid_argument("grid end lies before its start");
  return g;
}

std::vector<double> grid_points(const Grid& g) {
  std::vector<double> out;
  // Index-based so the endpoint is not lost to accumulated rounding.
  const auto count = static_cast<long>(std::floor((g.to - g.from) / g.step * (1 + 1e-12))) + 1;
  for (long i = 0; i < count; ++i) out.push_back(g.from + static_cast<double>(i) * g.step);
  return out;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(wald::parse_real(p, 0));
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::string g10(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Limiting laws of Wald statistics at singular points, and the tetrad test"};
  app.set_version_flag("--version", std::string(WALD_VERSION));
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  unsigned threads = wald::default_threads();
  std::string out_path;
  app.add_option("--seed", seed, "Random seed")->envname("WALD_SEED")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads (1 gives bitwise-reproducible sampling)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "Write output to FILE instead of stdout");

  // sample
  auto* sample = app.add_subcommand("sample", "Draw W_{f,Sigma} or a named limit law");
  std::string s_law, s_poly, s_sigma, s_mono;
  std::size_t s_n = 100000;
  auto* s_law_opt = sample->add_option("--law", s_law, "Law spec, e.g. scaled-chisq:0.25:1");
  auto* s_poly_opt = sample->add_option("--poly", s_poly, "Polynomial file")->check(CLI::ExistingFile);
  auto* s_mono_opt = sample->add_option("--monomial", s_mono, "Monomial exponents a1,a2,...");
  sample->add_option("--sigma", s_sigma, "Covariance matrix file")->check(CLI::ExistingFile);
  sample->add_option("--n", s_n, "Number of draws")->check(CLI::Range(std::size_t{2}, std::size_t{1} << 34));
  s_law_opt->excludes(s_poly_opt)->excludes(s_mono_opt);
  s_poly_opt->excludes(s_mono_opt);

  // cdf / quantile
  auto* cdf = app.add_subcommand("cdf", "Tabulate a limit law's distribution function");
  std::string c_law, c_grid;
  cdf->add_option("law", c_law, "Law spec")->required();
  cdf->add_option("--grid", c_grid, "FROM:TO:STEP")->required();

  auto* quant = app.add_subcommand("quantile", "Tabulate a limit law's quantile function");
  std::string q_law, q_grid;
  quant->add_option("law", q_law, "Law spec")->required();
  quant->add_option("--grid", q_grid, "FROM:TO:STEP over probabilities")->required();

  // classify
  auto* classify = app.add_subcommand("classify", "Limit law and bounds for a quadratic form");
  std::string k_quad, k_sigma;
  classify->add_option("--quad", k_quad, "Degree-2 polynomial file")->required()->check(CLI::ExistingFile);
  classify->add_option("--sigma", k_sigma, "Covariance matrix file")->required()->check(CLI::ExistingFile);

  // tetrad-test
  auto* tetrad = app.add_subcommand("tetrad-test", "Wald test of vanishing tetrads");
  std::string t_data, t_indices;
  bool t_all = false;
  tetrad->add_option("--data", t_data, "CSV data file, optional header")->required()->check(CLI::ExistingFile);
  auto* t_idx_opt = tetrad->add_option("--indices", t_indices, "1-based i,j,k,l");
  auto* t_all_opt = tetrad->add_flag("--all", t_all, "Test every tetrad of the data");
  t_idx_opt->excludes(t_all_opt);

  // verify
  auto* verify = app.add_subcommand("verify", "Run the numerical verification suite");
  std::string v_suite = "all";
  std::size_t v_n = 1'000'000;
  verify->add_option("--suite", v_suite, "all|theorems|conjectures")
      ->check(CLI::IsMember({"all", "theorems", "conjectures"}))
      ->capture_default_str();
  verify->add_option("--n", v_n, "Monte Carlo draws per check")->capture_default_str();

  // moments
  auto* moments = app.add_subcommand("moments", "E[T^m] of the angular function by quadrature");
  double m_sigma = 1.0;
  std::string m_phis = "0,0.3,0.7,1.2,1.5";
  std::string m_orders = "1,2,3,4";
  moments->add_option("--sigma", m_sigma, "Exponent ratio parameter")->capture_default_str();
  moments->add_option("--phis", m_phis, "Comma-separated angles in [0, pi/2)")->capture_default_str();
  moments->add_option("--m", m_orders, "Comma-separated moment orders")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  std::fprintf(stderr, "wald %s seed=%llu threads=%u\n", WALD_VERSION,
               static_cast<unsigned long long>(seed), threads);

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::fprintf(stderr, "error: cannot open %s for writing\n", out_path.c_str());
      return kExitUsage;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : file;

  try {
    if (*sample) {
      std::vector<double> draws;
      if (!s_law.empty()) {
        draws = wald::sample_law(wald::parse_law(s_law), s_n, seed, threads).values();
      } else if (!s_poly.empty() || !s_mono.empty()) {
        if (s_sigma.empty()) throw std::invalid_argument("--sigma is required with --poly/--monomial");
        const auto sigma = wald::CovarianceMatrix::validate(wald::read_matrix_file(s_sigma));
        wald::WaldSampleConfig cfg;
        cfg.n = s_n;
        cfg.seed = seed;
        cfg.threads = threads;
        draws = s_poly.empty()
                    ? wald::draw_wald(wald::MonomialForm(parse_list(s_mono)), sigma, cfg)
                    : wald::draw_wald(wald::read_polynomial_file(s_poly), sigma, cfg);
      } else {
        throw std::invalid_argument("sample needs --law, --poly or --monomial");
      }
      for (double v : draws) out << wald::format_real(v) << '\n';
    } else if (*cdf) {
      const auto law = wald::parse_law(c_law);
      for (double t : grid_points(parse_grid(c_grid))) {
        out << g10(t) << '\t' << g10(wald::cdf(law, t)) << '\n';
      }
    } else if (*quant) {
      const auto law = wald::parse_law(q_law);
      for (double p : grid_points(parse_grid(q_grid))) {
        out << g10(p) << '\t' << g10(wald::quantile(law, p)) << '\n';
      }
    } else if (*classify) {
      const auto a = wald::quadratic_to_matrix(wald::read_polynomial_file(k_quad));
      const auto sigma = wald::CovarianceMatrix::validate(wald::read_matrix_file(k_sigma));
      if (a.dimension() != sigma.dimension()) {
        throw std::invalid_argument("quadratic form and covariance differ in dimension");
      }
      out << wald::classify(a, sigma).report();
    } else if (*tetrad) {
      const auto data = wald::read_csv(t_data);
      std::vector<wald::TetradIndex> idx;
      if (t_all) {
        idx = wald::all_tetrads(static_cast<int>(data.cols()));
      } else {
        if (t_indices.empty()) throw std::invalid_argument("tetrad-test needs --indices or --all");
        const auto v = parse_list(t_indices);
        if (v.size() != 4) throw std::invalid_argument("--indices needs exactly four values");
        int iv[4];
        for (int a = 0; a < 4; ++a) {
          if (v[a] != std::floor(v[a])) throw std::invalid_argument("indices must be integers");
          iv[a] = static_cast<int>(v[a]) - 1;
        }
        idx.push_back({iv[0], iv[1], iv[2], iv[3]});
      }
      const Eigen::MatrixXd theta = wald::empirical_covariance(data);
      std::vector<wald::WaldReport> reports(idx.size());
      wald::for_each_batch(idx.size(), threads, [&](std::size_t r) {
        reports[r] = wald::wald_tetrad_test(theta, data.rows(), idx[r]);
      });
      for (const auto& r : reports) {
        out << r.index.i + 1 << ' ' << r.index.j + 1 << ' ' << r.index.k + 1 << ' ' << r.index.l + 1
            << ' ' << g10(r.gamma_hat) << ' ' << g10(r.t_stat) << ' ' << g10(r.p_regular) << ' '
            << g10(r.p_singular) << ' ' << wald::regime_name(r.regime_hint) << '\n';
      }
    } else if (*verify) {
      const auto results = wald::run_suite(wald::parse_suite(v_suite), v_n, seed, threads);
      out << wald::format_report(results);
      out.flush();
      if (!wald::theorems_pass(results)) return kExitFailedTheorem;
    } else if (*moments) {
      const auto phis = parse_list(m_phis);
      std::vector<int> orders;
      for (double m : parse_list(m_orders)) {
        if (m != std::floor(m)) throw std::invalid_argument("moment orders must be integers");
        orders.push_back(static_cast<int>(m));
      }
      const auto table = wald::moment_invariance_check(m_sigma, phis, orders);
      out << "m\tphi\tmoment\n";
      for (std::size_t a = 0; a < orders.size(); ++a)
        for (std::size_t b = 0; b < phis.size(); ++b)
          out << orders[a] << '\t' << g10(phis[b]) << '\t' << g10(table.moments[a][b]) << '\n';
      out << "# max_deviation " << g10(table.max_deviation) << '\n';
    }
  } catch (const wald::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return 0;
}
