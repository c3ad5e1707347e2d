#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lll/adapters.hpp"
#include "lll/parallel.hpp"

namespace py = pybind11;
using namespace lll;

namespace {

struct Loaded {
  bool is_cnf = false;
  CnfFormula cnf;
  Hypergraph graph;
  AdaptedSystem adapted;
};

Loaded load(const std::string& text, double eps, bool clique_cover) {
  Loaded inst;
  size_t pos = 0;
  char kind = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    if (eol > pos && text[pos] != 'c') {
      kind = text[pos];
      break;
    }
    pos = eol + 1;
  }
  if (kind == 'p') {
    inst.is_cnf = true;
    inst.cnf = parse_dimacs(text);
    inst.adapted = cnf_event_system(inst.cnf, eps, clique_cover);
  } else if (kind == 'h') {
    inst.graph = parse_hypergraph(text);
    inst.adapted = hypergraph2color_event_system(inst.graph, eps, clique_cover);
  } else {
    throw input_error("unrecognized input format");
  }
  return inst;
}

py::dict validation_dict(const ValidationReport& report) {
  py::dict d;
  d["ok"] = report.ok;
  py::list entries;
  for (const auto& e : report.entries) {
    py::dict entry;
    entry["event"] = e.event_id;
    entry["pr"] = to_double(e.pr);
    entry["bound"] = e.bound;
    entry["ok"] = e.ok;
    entries.append(entry);
  }
  d["events"] = entries;
  return d;
}

py::dict params_dict(const LLLParams& params) {
  py::dict d;
  d["M"] = to_double(params.M);
  d["gamma"] = params.gamma;
  d["w_min"] = params.w_min;
  d["table_width"] = params.table_width();
  return d;
}

py::dict validate(const std::string& text, double eps) {
  auto inst = load(text, eps, true);
  return validation_dict(inst.adapted.validation);
}

py::dict solve(const std::string& text, const std::string& mode, double eps,
               std::uint64_t seed, int workers) {
  auto inst = load(text, eps, true);
  if (!inst.adapted.validation.ok)
    throw validation_error("LLL epsilon-slack condition violated");
  const auto& sys = inst.adapted.system;

  py::dict out;
  out["mode"] = mode;
  std::vector<int> assignment;
  if (mode == "rand") {
    std::vector<int> sizes;
    for (const auto& t : inst.adapted.split_trees) sizes.push_back(t.size());
    auto params = derive_params(sys, inst.adapted.x, eps, &sizes);
    auto run = run_randomized(sys, seed, std::max<long>(default_max_steps(sys, params), 1000000));
    if (run.outcome != RunOutcome::success)
      throw internal_error("randomized run did not converge");
    out["steps"] = run.steps;
    out["params"] = params_dict(params);
    assignment = run.assignment;
  } else if (mode == "det") {
    auto res = solve_deterministic(sys, inst.adapted.x, eps, &inst.adapted.split_trees, true);
    out["steps"] = res.run.steps;
    out["phi_empty"] = to_double(res.phi_empty);
    out["forbidden_count"] = res.forbidden.size();
    out["params"] = params_dict(res.params);
    assignment = res.assignment;
  } else if (mode == "par") {
    auto res = solve_parallel(sys, inst.adapted.x, eps, workers);
    out["rounds"] = res.run.rounds;
    out["table_index"] = res.table_index;
    out["space_size"] = res.space.size;
    out["params"] = params_dict(res.params);
    assignment = res.assignment;
  } else {
    throw input_error("unknown mode: " + mode);
  }

  bool good = inst.is_cnf ? satisfies(inst.cnf, assignment)
                          : properly_colored(inst.graph, assignment);
  if (!good) throw internal_error("solver returned a non-satisfying assignment");
  out["assignment"] = assignment;
  return out;
}

py::dict enumerate_witnesses(const std::string& text, double eps) {
  auto inst = load(text, eps, true);
  if (!inst.adapted.validation.ok)
    throw validation_error("LLL epsilon-slack condition violated");
  const auto& sys = inst.adapted.system;
  std::vector<int> sizes;
  for (const auto& t : inst.adapted.split_trees) sizes.push_back(t.size());
  auto params = derive_params(sys, inst.adapted.x, eps, &sizes);
  auto fset = enumerate_forbidden(sys, params, inst.adapted.split_trees);
  py::dict out;
  out["count"] = fset.size();
  out["f1"] = fset.f1.size();
  out["f2"] = fset.f2.size();
  out["phi_empty"] = to_double(phi(sys, fset, PartialTable{{}, params.table_width()}));
  out["params"] = params_dict(params);
  return out;
}

std::optional<std::vector<int>> fast_path(const std::string& dimacs) {
  return fast_path_satisfy(parse_dimacs(dimacs));
}

}  // namespace

PYBIND11_MODULE(_lllforge, m) {
  m.doc() = "constructive Lovasz Local Lemma solver";
  py::register_exception<validation_error>(m, "ValidationError");
  py::register_exception<input_error>(m, "InputError");
  py::register_exception<internal_error>(m, "InternalError");
  m.def("validate", &validate, py::arg("text"), py::arg("eps") = 1.0);
  m.def("solve", &solve, py::arg("text"), py::arg("mode") = "det", py::arg("eps") = 1.0,
        py::arg("seed") = 1, py::arg("workers") = 1);
  m.def("enumerate_witnesses", &enumerate_witnesses, py::arg("text"), py::arg("eps") = 1.0);
  m.def("fast_path", &fast_path, py::arg("dimacs"));
}
