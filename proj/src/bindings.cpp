#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nlc/graph.hpp"
#include "nlc/io.hpp"
#include "nlc/map_equation.hpp"
#include "nlc/metrics.hpp"
#include "nlc/model.hpp"
#include "nlc/model_selection.hpp"

namespace py = pybind11;

namespace nlc {
namespace {

using LabelSets = std::vector<std::vector<std::string>>;

Cover cover_from_labels(const Graph& g, const LabelSets& sets) {
  std::vector<std::vector<NodeId>> ids;
  for (const auto& set : sets) {
    auto& out = ids.emplace_back();
    for (const auto& label : set) {
      const std::int64_t id = g.find(label);
      if (id < 0) throw py::key_error("unknown node '" + label + "'");
      out.push_back(static_cast<NodeId>(id));
    }
  }
  return make_cover(g.num_nodes(), std::move(ids));
}

LabelSets labels_of(const Graph& g, const std::vector<std::vector<NodeId>>& sets) {
  LabelSets out;
  for (const auto& set : sets) {
    auto& labels = out.emplace_back();
    for (NodeId i : set) labels.push_back(g.label(i));
  }
  return out;
}

Graph from_edges(const std::vector<std::tuple<std::string, std::string, double>>& edges) {
  std::ostringstream text;
  text.precision(17);
  for (const auto& [u, v, w] : edges) text << u << ' ' << v << ' ' << w << '\n';
  return parse_edge_list_string(text.str()).graph;
}

py::dict fit_dict(const Graph& g, const FitResult& r) {
  py::dict out;
  out["log_likelihood"] = r.log_likelihood;
  out["iterations"] = r.iterations;
  out["converged"] = r.converged;
  std::vector<std::vector<double>> d(g.num_nodes());
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    const auto row = r.params.row(i);
    d[i].assign(row.begin(), row.end());
  }
  out["params"] = d;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = kVersion;

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<UndefinedMetricError>(m, "UndefinedMetricError", PyExc_ArithmeticError);

  py::class_<Graph>(m, "Graph")
      .def_static("load", [](const std::string& path) { return load_graph(path).graph; }, py::arg("path"))
      .def_static("from_edges", &from_edges, py::arg("edges"),
                  "Builds a graph from (u, v, weight) tuples.")
      .def("binarize", [](const Graph& g) { return binarize(g); })
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("num_edges", &Graph::num_edges)
      .def_property_readonly("labels", &Graph::labels)
      .def("degree", [](const Graph& g, const std::string& label) {
        const std::int64_t id = g.find(label);
        if (id < 0) throw py::key_error("unknown node '" + label + "'");
        return g.weighted_degree(static_cast<NodeId>(id));
      })
      .def("__repr__", [](const Graph& g) {
        return "<Graph nodes=" + std::to_string(g.num_nodes()) + " edges=" + std::to_string(g.num_edges()) + ">";
      });

  m.def(
      "fit",
      [](const Graph& g, std::size_t c, std::size_t restarts, std::uint64_t seed, double tol, int max_iter) {
        FitOptions o{tol, max_iter, seed};
        FitResult r;
        {
          py::gil_scoped_release release;
          r = fit_best(g, c, restarts, o).best;
        }
        return fit_dict(g, r);
      },
      py::arg("graph"), py::arg("c"), py::arg("restarts") = 50, py::arg("seed") = 0, py::arg("tol") = 1e-8,
      py::arg("max_iter") = 1000);

  m.def(
      "detect",
      [](const Graph& g, const std::string& scheme, std::size_t c_min, std::size_t c_max, std::size_t restarts,
         std::uint64_t seed) {
        SelectionOptions o;
        o.c_min = c_min;
        o.c_max = c_max;
        o.restarts = restarts;
        o.fit.seed = seed;
        const Scheme s = scheme_from_string(scheme);
        Selection sel;
        {
          py::gil_scoped_release release;
          sel = select(g, s, o);
        }
        std::string types;
        for (CommunityType t : sel.assignment.flags) types += t == CommunityType::Node ? 'N' : 'L';
        py::dict out;
        out["c"] = sel.c;
        out["scheme"] = to_string(sel.scheme);
        out["types"] = types;
        out["mdl"] = sel.report.L;
        out["log_likelihood"] = sel.fit.log_likelihood;
        out["cover"] = labels_of(g, sel.cover.sets);
        return out;
      },
      py::arg("graph"), py::arg("scheme") = "hybrid", py::arg("c_min") = 2, py::arg("c_max") = 0,
      py::arg("restarts") = 50, py::arg("seed") = 0);

  m.def(
      "map_equation",
      [](const Graph& g, const LabelSets& cover) { return map_equation(g, cover_from_labels(g, cover)).L; },
      py::arg("graph"), py::arg("cover"));

  m.def(
      "conductance",
      [](const Graph& g, const std::vector<std::string>& nodes) {
        const Cover c = cover_from_labels(g, {nodes});
        return conductance(g, c.sets[0]);
      },
      py::arg("graph"), py::arg("nodes"));

  m.def(
      "wac",
      [](const Graph& g, const LabelSets& communities) {
        return wac(g, cover_from_labels(g, communities).sets).value;
      },
      py::arg("graph"), py::arg("communities"));

  m.def(
      "enmi",
      [](const Graph& g, const LabelSets& a, const LabelSets& b) {
        return enmi(cover_from_labels(g, a), cover_from_labels(g, b));
      },
      py::arg("graph"), py::arg("a"), py::arg("b"));
}

}  // namespace nlc
