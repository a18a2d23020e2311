#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "mfe/brauer.hpp"
#include "mfe/cumulants.hpp"
#include "mfe/moments.hpp"
#include "mfe/ncpart.hpp"
#include "mfe/opvalued.hpp"
#include "mfe/rmt.hpp"

namespace py = pybind11;
using namespace mfe;

namespace {

// Rationals cross the boundary as text: "3", "1/4", or str() of an int or Fraction.
Rational rational_of(const py::handle& x) { return parse_rational(py::str(x).cast<std::string>()); }

DimensionFunction ratios_of(const std::vector<py::object>& xs) {
  std::vector<Rational> r;
  for (const auto& x : xs) r.push_back(rational_of(x));
  return DimensionFunction(r);
}

FieldClass field_class_of(const std::string& s) {
  if (s == "complex") return FieldClass::ComplexLike;
  if (s == "real") return FieldClass::RealLike;
  throw py::value_error("field class must be 'complex' or 'real'");
}

NonCrossingPartition nc_of(int k, const std::vector<std::vector<int>>& blocks) {
  return NonCrossingPartition(k, blocks);
}

}  // namespace

PYBIND11_MODULE(_mfe, m) {
  m.doc() = "Moments, cumulants and Monte-Carlo estimates for block extractions of unitary Brownian motions";

  py::class_<MomentFunction>(m, "MomentFunction")
      .def("__call__", &MomentFunction::operator(), py::arg("t"))
      .def("terms",
           [](const MomentFunction& f) {
             std::vector<std::pair<std::string, std::vector<std::string>>> out;
             for (const auto& term : f.terms()) {
               std::vector<std::string> c;
               for (const auto& x : term.coeffs) c.push_back(to_string(x));
               out.emplace_back(to_string(term.rate), c);
             }
             return out;
           })
      .def("derivative_at_zero", [](const MomentFunction& f, int j) { return to_string(f.derivative_at_zero(j)); })
      .def("is_zero", &MomentFunction::is_zero)
      .def("__eq__", [](const MomentFunction& a, const MomentFunction& b) { return a == b; })
      .def("__str__", &MomentFunction::to_string)
      .def("__repr__", [](const MomentFunction& f) { return "MomentFunction(" + f.to_string() + ")"; });

  m.def("moment_limit",
        [](const std::string& word, const std::vector<py::object>& ratios, const std::string& fc) {
          return moment_of_word_limit(parse_oword(word), ratios_of(ratios), field_class_of(fc));
        },
        py::arg("word"), py::arg("ratios"), py::arg("field_class") = "complex");
  m.def("moment_finite",
        [](const std::string& word, double t, const std::string& field, const std::vector<int>& dims) {
          return moment_of_word_finite(parse_oword(word), t, parse_field(field), dimension_function(dims));
        },
        py::arg("word"), py::arg("t"), py::arg("field"), py::arg("dims"));

  m.def("kappa_closed_form",
        [](const std::vector<int>& i, const std::vector<int>& j, int n) {
          return kappa_closed_form(static_cast<int>(i.size()), n, Colourization{i, j});
        },
        py::arg("i"), py::arg("j"), py::arg("n"));
  m.def("cumulant_of_generators",
        [](const std::vector<int>& i, const std::vector<int>& j, int n) {
          return cumulant_of_generators(Colourization{i, j}, n);
        },
        py::arg("i"), py::arg("j"), py::arg("n"));
  m.def("biane_moment", &biane_moment, py::arg("p"));

  m.def("limit_cumulant_coefficient",
        [](const std::vector<std::vector<int>>& beta, const std::vector<int>& i, const std::vector<int>& j,
           const std::vector<bool>& star, const std::vector<int>& letters, const std::vector<py::object>& ratios) {
          const int k = static_cast<int>(i.size());
          return limit_cumulant_coefficient(nc_of(k, beta), cumulant_seed(i, j, star, letters), ratios_of(ratios));
        },
        py::arg("beta"), py::arg("i"), py::arg("j"), py::arg("star"), py::arg("letters"), py::arg("ratios"));

  m.def("enumerate_nc",
        [](int k) {
          std::vector<std::vector<std::vector<int>>> out;
          for (const auto& pi : enumerate_nc(k)) out.push_back(pi.blocks());
          return out;
        },
        py::arg("k"));
  m.def("mobius_nc",
        [](int k, const std::vector<std::vector<int>>& pi, const std::vector<std::vector<int>>& rho) {
          return to_string(mobius_nc(nc_of(k, pi), nc_of(k, rho)));
        },
        py::arg("k"), py::arg("pi"), py::arg("rho"));

  m.def("compose",
        [](const std::string& top, const std::string& bottom, const std::vector<py::object>& dims) {
          const auto df = ratios_of(dims);
          const auto x = compose(parse_diagram(top), parse_diagram(bottom), df);
          if (!x) return py::object(py::none());
          const auto [b, factor] = project_loops(*x, df);
          return py::object(py::make_tuple(to_text(b), to_string(factor)));
        },
        py::arg("top"), py::arg("bottom"), py::arg("dims"),
        "Stacks top over bottom; returns (diagram, loop factor) or None for a zero product.");

  m.def("casimir_check", [](int N, const std::string& field) { return casimir_scalar_check(lie_basis(N, parse_field(field))); },
        py::arg("N"), py::arg("field"));

  m.def("simulate",
        [](const std::vector<std::string>& words, const std::string& field, const std::vector<int>& dims,
           const std::vector<double>& times, std::size_t samples, std::uint64_t seed, int steps_per_unit) {
          std::vector<OWord> ws;
          for (const auto& w : words) ws.push_back(parse_oword(w));
          McConfig cfg;
          cfg.field = parse_field(field);
          cfg.dims = dims;
          cfg.times = times;
          cfg.samples = samples;
          cfg.seed = seed;
          cfg.steps_per_unit = steps_per_unit;
          std::vector<Estimate> est;
          {
            py::gil_scoped_release release;
            est = estimate_words(ws, cfg);
          }
          py::list out;
          for (std::size_t q = 0; q < times.size(); ++q)
            for (std::size_t s = 0; s < words.size(); ++s) {
              const auto& e = est[q * words.size() + s];
              py::dict row;
              row["word"] = words[s];
              row["t"] = times[q];
              row["mean"] = e.mean;
              row["stderr"] = e.stderr_;
              out.append(row);
            }
          return out;
        },
        py::arg("words"), py::arg("field"), py::arg("dims"), py::arg("times"), py::arg("samples") = 1000,
        py::arg("seed") = 1, py::arg("steps_per_unit") = kDefaultStepsPerUnit);
}
