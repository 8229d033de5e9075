#include <array>
#include <optional>

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wald/gaussian.hpp"
#include "wald/limit_laws.hpp"
#include "wald/polynomial.hpp"
#include "wald/quad_classify.hpp"
#include "wald/tetrad.hpp"
#include "wald/text_io.hpp"
#include "wald/verify.hpp"
#include "wald/wald_sampler.hpp"

namespace py = pybind11;

namespace {

py::array_t<double> to_array(std::vector<double> v) {
  auto* heap = new std::vector<double>(std::move(v));
  py::capsule owner(heap, [](void* p) { delete static_cast<std::vector<double>*>(p); });
  return py::array_t<double>(static_cast<py::ssize_t>(heap->size()), heap->data(), owner);
}

wald::WaldSampleConfig config(std::size_t n, std::uint64_t seed, unsigned threads) {
  wald::WaldSampleConfig cfg;
  cfg.n = n;
  cfg.seed = seed;
  cfg.threads = threads;
  return cfg;
}

wald::HomogeneousPolynomial make_poly(const std::vector<std::pair<double, std::vector<int>>>& terms) {
  std::vector<wald::Term> t;
  for (const auto& [c, e] : terms) t.push_back({c, e});
  return wald::HomogeneousPolynomial(std::move(t));
}

py::dict classification_dict(const wald::QuadraticClassification& c) {
  py::dict d;
  d["eigenvalues"] = c.eigenvalues;
  d["positive"] = c.positive;
  d["negative"] = c.negative;
  d["law"] = c.law ? py::object(py::str(wald::law_spec(*c.law))) : py::object(py::none());
  d["lower_bound"] =
      c.lower_bound ? py::object(py::str(wald::law_spec(*c.lower_bound))) : py::object(py::none());
  d["conjectured_lower"] = c.conjectured_lower;
  d["upper_bound"] = wald::law_spec(c.upper_bound);
  d["rule"] = c.rule;
  d["machine_line"] = c.machine_line();
  return d;
}

py::dict report_dict(const wald::WaldReport& r) {
  py::dict d;
  d["indices"] = py::make_tuple(r.index.i, r.index.j, r.index.k, r.index.l);
  d["gamma_hat"] = r.gamma_hat;
  d["t_stat"] = r.t_stat;
  d["p_regular"] = r.p_regular;
  d["p_singular"] = r.p_singular;
  d["gradient_norm"] = r.gradient_norm;
  d["regime_hint"] = wald::regime_name(r.regime_hint);
  return d;
}

wald::TetradIndex make_index(const std::array<int, 4>& v) { return {v[0], v[1], v[2], v[3]}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Limiting laws of Wald statistics at singular points";
  m.attr("__version__") = WALD_VERSION;

  py::register_exception<wald::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<wald::DegenerateWaldError>(m, "DegenerateWaldError", PyExc_RuntimeError);
  py::register_exception<wald::DegenerateCovarianceError>(m, "DegenerateCovarianceError",
                                                          PyExc_RuntimeError);

  py::class_<wald::HomogeneousPolynomial>(m, "Polynomial")
      .def(py::init(&make_poly), py::arg("terms"),
           "Terms as (coefficient, exponent list) pairs.")
      .def_static("parse", &wald::parse_polynomial, py::arg("text"))
      .def_property_readonly("dimension", &wald::HomogeneousPolynomial::dimension)
      .def_property_readonly("degree", &wald::HomogeneousPolynomial::degree)
      .def_property_readonly("terms",
                             [](const wald::HomogeneousPolynomial& f) {
                               std::vector<std::pair<double, std::vector<int>>> out;
                               for (const auto& t : f.terms()) out.emplace_back(t.coeff, t.exponents);
                               return out;
                             })
      .def("eval", [](const wald::HomogeneousPolynomial& f, const std::vector<double>& x) { return f.eval(x); })
      .def("gradient",
           [](const wald::HomogeneousPolynomial& f, const std::vector<double>& x) { return f.gradient(x); })
      .def("scale", &wald::HomogeneousPolynomial::scale, py::arg("c"))
      .def("compose_linear", &wald::HomogeneousPolynomial::compose_linear, py::arg("b"))
      .def("__eq__", [](const wald::HomogeneousPolynomial& a, const wald::HomogeneousPolynomial& b) { return a == b; })
      .def("__str__", &wald::format_polynomial);

  m.def("tetrad_polynomial", &wald::tetrad_polynomial);

  m.def(
      "sample_wald",
      [](const wald::HomogeneousPolynomial& f, const Eigen::MatrixXd& sigma, std::size_t n,
         std::uint64_t seed, unsigned threads) {
        const auto s = wald::CovarianceMatrix::validate(sigma);
        std::vector<double> v;
        {
          py::gil_scoped_release release;
          v = wald::draw_wald(f, s, config(n, seed, threads));
        }
        return to_array(std::move(v));
      },
      py::arg("f"), py::arg("sigma"), py::arg("n"), py::arg("seed") = 42, py::arg("threads") = 1,
      "Draws of W = f(X)^2 / (grad f^T Sigma grad f), X ~ N(0, Sigma), in batch order.");

  m.def(
      "sample_monomial",
      [](const std::vector<double>& alpha, const Eigen::MatrixXd& sigma, std::size_t n,
         std::uint64_t seed, unsigned threads) {
        const auto s = wald::CovarianceMatrix::validate(sigma);
        const wald::MonomialForm mono(alpha);
        std::vector<double> v;
        {
          py::gil_scoped_release release;
          v = wald::draw_wald(mono, s, config(n, seed, threads));
        }
        return to_array(std::move(v));
      },
      py::arg("alpha"), py::arg("sigma"), py::arg("n"), py::arg("seed") = 42, py::arg("threads") = 1);

  m.def(
      "cdf", [](const std::string& spec, double t) { return wald::cdf(wald::parse_law(spec), t); },
      py::arg("law"), py::arg("t"));
  m.def(
      "cdf",
      [](const std::string& spec, const std::vector<double>& ts) {
        const auto law = wald::parse_law(spec);
        std::vector<double> out;
        for (double t : ts) out.push_back(wald::cdf(law, t));
        return to_array(std::move(out));
      },
      py::arg("law"), py::arg("t"));
  m.def(
      "quantile",
      [](const std::string& spec, double p) { return wald::quantile(wald::parse_law(spec), p); },
      py::arg("law"), py::arg("p"));
  m.def(
      "sample_law",
      [](const std::string& spec, std::size_t n, std::uint64_t seed, unsigned threads) {
        return to_array(wald::sample_law(wald::parse_law(spec), n, seed, threads).values());
      },
      py::arg("law"), py::arg("n"), py::arg("seed") = 42, py::arg("threads") = 1,
      "Sorted draws of a named law.");
  m.def(
      "ks_distance",
      [](std::vector<double> samples, const std::string& spec) {
        return wald::ks_distance(wald::EmpiricalDistribution(std::move(samples)), wald::parse_law(spec));
      },
      py::arg("samples"), py::arg("law"));
  m.def("tetrad_singular_cdf", &wald::tetrad_singular_cdf, py::arg("t"));
  m.def("stable_density", &wald::stable_density, py::arg("alpha"), py::arg("x"));

  m.def(
      "classify",
      [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& sigma) {
        return classification_dict(
            wald::classify(wald::QuadraticForm(a), wald::CovarianceMatrix::validate(sigma)));
      },
      py::arg("a"), py::arg("sigma"));
  m.def(
      "classify_spectrum",
      [](const std::vector<double>& l) { return classification_dict(wald::classify_spectrum(l)); },
      py::arg("eigenvalues"));
  m.def(
      "k_alpha", [](double alpha, std::optional<double> bound) {
        return bound ? wald::k_alpha(alpha, *bound) : wald::k_alpha(alpha);
      },
      py::arg("alpha"), py::arg("max_exceedance") = py::none());

  m.def(
      "empirical_covariance", [](const Eigen::MatrixXd& rows) { return wald::empirical_covariance(rows); },
      py::arg("data"));
  m.def(
      "tetrad_stat",
      [](const Eigen::MatrixXd& theta, const std::array<int, 4>& idx) {
        const auto s = wald::tetrad_stat(theta, make_index(idx));
        return py::make_tuple(s.gamma, s.gradient);
      },
      py::arg("theta"), py::arg("indices"));
  m.def(
      "wald_tetrad_test",
      [](const Eigen::MatrixXd& data, const std::array<int, 4>& idx) {
        return report_dict(wald::wald_tetrad_test(wald::DataMatrix(data), make_index(idx)));
      },
      py::arg("data"), py::arg("indices"), "Zero-based indices (i, j, k, l).");

  m.def(
      "run_suite",
      [](const std::string& suite, std::size_t n, std::uint64_t seed, unsigned threads) {
        std::vector<wald::VerificationResult> results;
        {
          py::gil_scoped_release release;
          results = wald::run_suite(wald::parse_suite(suite), n, seed, threads);
        }
        py::list out;
        for (const auto& r : results) {
          py::dict d;
          d["name"] = r.name;
          d["tier"] = wald::tier_name(r.tier);
          d["statistic"] = r.statistic;
          d["threshold"] = r.threshold;
          d["pass"] = r.pass;
          d["n"] = r.n_used;
          d["seed"] = r.seed;
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "theorems", py::arg("n") = 1'000'000, py::arg("seed") = 42,
      py::arg("threads") = 1);
  m.def(
      "moment_table",
      [](double sigma, const std::vector<double>& phis, const std::vector<int>& ms) {
        const auto t = wald::moment_invariance_check(sigma, phis, ms);
        py::dict d;
        d["moments"] = t.moments;
        d["max_deviation"] = t.max_deviation;
        return d;
      },
      py::arg("sigma"), py::arg("phis"), py::arg("ms"));
}
