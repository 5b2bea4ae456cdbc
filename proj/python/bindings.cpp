// Thin JSON-in, JSON-out surface over the C++ core; rationals cross as strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ordmed/bench.hpp"
#include "ordmed/instance_io.hpp"
#include "ordmed/oracle.hpp"
#include "ordmed/ordered.hpp"

namespace py = pybind11;
using namespace ordmed;

namespace {

std::vector<Rational> parse_all(const std::vector<std::string>& xs) {
  std::vector<Rational> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(parse_rational(x));
  return out;
}

Instance load(const std::string& doc) { return instance_from_json(Json::parse(doc)); }

BenchOptions options(int samples, std::uint64_t seed) {
  BenchOptions o;
  o.samples = samples;
  o.seed = seed;
  return o;
}

std::string solve(const std::string& doc, int samples, std::uint64_t seed) {
  const auto inst = load(doc);
  const auto opts = options(samples, seed);
  Json out;
  if (inst.kind() == VariantKind::fault_tolerant) {
    auto res = solve_ft(inst, ft_options_for(opts));
    out["solution"] = solution_to_json(inst, res.solution);
    out["cost"] = rational_to_json(res.evaluation.value);
    out["stats"] = res.stats_json();
  } else {
    PipelineOptions po;
    po.params = params_for(inst.kind(), opts);
    auto res = solve_single_assignment(inst, po);
    out["solution"] = solution_to_json(inst, res.solution);
    out["cost"] = rational_to_json(res.evaluation.value);
    out["trace"] = res.trace_json();
  }
  return out.dump();
}

std::string optimum(const std::string& doc) {
  const auto inst = load(doc);
  const auto opt = solve_exact(inst);
  Json out;
  out["value"] = rational_to_json(opt.value);
  out["open"] = Json::array();
  for (int i : opt.open) out["open"].push_back(inst.facility_ids[i]);
  return out.dump();
}

std::vector<std::string> generate(const std::string& variant, int count, std::uint64_t seed, bool top_ell) {
  GenSpec spec;
  spec.variant = parse_variant_kind(variant);
  spec.count = count;
  spec.top_ell = top_ell;
  std::vector<std::string> docs;
  for (const auto& g : gen_instances(spec, seed)) docs.push_back(instance_to_json(g.inst).dump());
  return docs;
}

}  // namespace

PYBIND11_MODULE(_ordmed, m) {
  py::register_exception<InvalidInstance>(m, "InvalidInstance", PyExc_ValueError);

  m.def("ordered_cost", [](const std::vector<std::string>& w, const std::vector<std::string>& c) {
    return to_string(ordered_cost(parse_all(w), parse_all(c)));
  });
  m.def("conic_cost", [](const std::vector<std::string>& w, const std::vector<std::string>& c) {
    return to_string(conic_cost(parse_all(w), parse_all(c)));
  });
  m.def("generate", &generate, py::arg("variant"), py::arg("count") = 1, py::arg("seed") = 1,
        py::arg("top_ell") = false);
  m.def("optimum", &optimum, py::arg("instance"));
  m.def("solve", &solve, py::arg("instance"), py::arg("samples") = 200, py::arg("seed") = 1,
        py::call_guard<py::gil_scoped_release>());
}
