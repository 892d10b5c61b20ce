// Python bindings. Rationals cross the boundary as "p/q" strings; the package
// wrapper turns them into fractions.Fraction.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hoopflux/cli.hpp"
#include "hoopflux/error.hpp"
#include "hoopflux/gauge.hpp"
#include "hoopflux/scene_io.hpp"

namespace py = pybind11;
using namespace hoopflux;

namespace {

std::vector<Loop> loops_named(const Scene& scene, const std::vector<std::string>& names) {
  std::vector<Loop> out;
  for (const std::string& n : names) out.push_back(loop(scene, n));
  return out;
}

std::vector<FluxCombo> singles(const std::vector<std::string>& faces) {
  std::vector<FluxCombo> out;
  for (const std::string& f : faces) out.push_back(FluxCombo::single(f));
  return out;
}

py::dict frame_dict(const HoopSet& frame) {
  py::list hoops;
  for (std::size_t i = 0; i < frame.size(); ++i) {
    py::dict chain;
    for (const auto& [seg, n] : frame.chains[i].coefficients()) chain[py::str(seg.str())] = n;
    py::dict h;
    h["label"] = frame.labels[i];
    h["chain"] = chain;
    if (frame.certificate) h["exclusive"] = frame.certificate->exclusive[i].str();
    hoops.append(h);
  }
  py::dict d;
  d["hoops"] = hoops;
  return d;
}

std::vector<std::vector<std::string>> matrix_strings(const Matrix& m) {
  std::vector<std::vector<std::string>> out;
  for (const Vector& row : m) {
    std::vector<std::string> r;
    for (const Rational& q : row) r.push_back(to_string(q));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact hoop, flux and gauge-reduction calculus";

  // leaked on purpose: the translator may run during interpreter teardown
  static PyObject* error_type = py::exception<Error>(m, "Error").release().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object ex = py::reinterpret_borrow<py::object>(error_type)(e.what());
      ex.attr("kind") = std::string(to_string(e.code()));
      PyErr_SetObject(error_type, ex.ptr());
    }
  });

  py::class_<Scene>(m, "Scene")
      .def_property_readonly("segments",
                             [](const Scene& s) {
                               std::vector<std::string> out;
                               for (const auto& [id, seg] : s.segments) out.push_back(id.str());
                               return out;
                             })
      .def_property_readonly("faces",
                             [](const Scene& s) {
                               std::vector<std::string> out;
                               for (const auto& [id, f] : s.faces) out.push_back(id.str());
                               return out;
                             })
      .def_property_readonly("loops",
                             [](const Scene& s) {
                               std::vector<std::string> out;
                               for (const auto& [name, l] : s.loops) out.push_back(name);
                               return out;
                             })
      .def_property_readonly("graphs",
                             [](const Scene& s) {
                               std::vector<std::string> out;
                               for (const auto& [name, g] : s.graphs) out.push_back(name);
                               return out;
                             })
      .def_property_readonly("systems",
                             [](const Scene& s) {
                               std::vector<std::string> out;
                               for (const auto& [name, d] : s.systems) out.push_back(name);
                               return out;
                             })
      .def("to_json", [](const Scene& s) { return serialize_scene(s); })
      .def("validate", [](const Scene& s) { return validate_scene(s); })
      .def("refine", [](const Scene& s, const std::string& segment) { return refine_segment(s, segment).scene; },
           py::arg("segment"));

  m.def("load_scene", [](const std::string& path) { return load_scene(path); }, py::arg("path"));
  m.def("parse_scene", [](const std::string& text) { return parse_scene(text); }, py::arg("text"));

  m.def(
      "epsilon",
      [](const Scene& s, const std::string& f, const std::string& l) { return epsilon_loop(face(s, f), loop(s, l)).str(); },
      py::arg("scene"), py::arg("face"), py::arg("loop"));

  m.def(
      "hoop_basis",
      [](const Scene& s, const std::vector<std::string>& loops) {
        const BasisResult b = independent_basis(s.segments, loops_named(s, loops));
        py::dict d = frame_dict(b.basis);
        d["decompositions"] = b.decompositions;
        return d;
      },
      py::arg("scene"), py::arg("loops"));

  m.def(
      "g_matrix",
      [](const Scene& s, const std::vector<std::string>& loops, const std::vector<std::string>& faces) {
        const HoopSet frame = independent_basis(s.segments, loops_named(s, loops)).basis;
        return matrix_strings(g_matrix(s, singles(faces), frame).entries);
      },
      py::arg("scene"), py::arg("loops"), py::arg("faces"));

  m.def(
      "gauge_reduce",
      [](const Scene& s, const std::string& graph_name, const std::string& poly) -> py::object {
        const Graph& g = graph(s, graph_name);
        auto resolve = [&](std::string_view name) -> std::size_t {
          if (name.size() > 2 && name.substr(0, 2) == "x_") {
            if (auto i = g.index_of(std::string(name.substr(2)))) return *i;
          }
          if (name.size() > 1 && name[0] == 'x') return static_cast<std::size_t>(std::stoul(std::string(name.substr(1)))) - 1;
          throw Error(ErrorCode::UnknownName, "unknown variable '" + std::string(name) + "'");
        };
        const auto reduced = gauge_reduce(g, parse_polynomial(poly, resolve));
        if (const Rational* c = std::get_if<Rational>(&reduced)) return py::str(to_string(*c));
        const CylFunction& psi = std::get<CylFunction>(reduced);
        py::dict d;
        d["labels"] = psi.frame.labels;
        d["poly"] = format(psi.poly);
        return d;
      },
      py::arg("scene"), py::arg("graph"), py::arg("poly"));

  m.def(
      "constrain",
      [](const Scene& s, const std::string& graph_name, const std::vector<std::string>& faces,
         std::optional<std::vector<std::size_t>> hint) {
        const ConstrainedSystem c = constrain_system(s, {"py", singles(faces), graph_name}, std::move(hint));
        py::dict d;
        d["chosen"] = c.chosen;
        d["kernel"] = matrix_strings(c.kernel);
        d["g"] = matrix_strings(c.system.g);
        d["nondegenerate"] = c.system.nondegenerate;
        return d;
      },
      py::arg("scene"), py::arg("graph"), py::arg("faces"), py::arg("hint") = py::none());

  m.def(
      "run",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Run a command-line verb in process; returns (exit code, stdout, stderr).");
}
