#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "automps/grid2d.hpp"
#include "automps/models.hpp"
#include "automps/mp_compile.hpp"
#include "automps/oracle.hpp"
#include "automps/specfile.hpp"
#include "automps/variational.hpp"

namespace py = pybind11;
using namespace automps;

namespace {

Word as_word(const WeightedAutomaton& a, const py::object& word) {
  if (py::isinstance<py::str>(word))
    return word_from_chars(a, word.cast<std::string>());
  return word.cast<Word>();
}

py::dict report_dict(const SweepReport& report) {
  py::dict d;
  d["sweep_energies"] = report.sweep_energies;
  d["global_energies"] = report.global_energies;
  d["converged"] = report.converged;
  d["warnings"] = report.warnings;
  py::list steps;
  for (const auto& s : report.steps) {
    py::dict step;
    step["site"] = s.site;
    step["lambda"] = s.lambda;
    step["residual"] = s.residual;
    step["op_absorptions"] = s.op_absorptions;
    step["metric_absorptions"] = s.metric_absorptions;
    steps.append(step);
  }
  d["steps"] = steps;
  return d;
}

}  // namespace

PYBIND11_MODULE(automps, m) {
  m.doc() = "weighted finite automata compiled to matrix product chains";

  py::register_exception<Error>(m, "AutompsError");

  py::enum_<SymbolKind>(m, "SymbolKind")
      .value("state", SymbolKind::state)
      .value("operator", SymbolKind::op);

  py::enum_<Boundary>(m, "Boundary")
      .value("open", Boundary::open)
      .value("periodic", Boundary::periodic);

  py::class_<WeightedAutomaton>(m, "WeightedAutomaton")
      .def_property_readonly(
          "states", [](const WeightedAutomaton& a) { return a.states; })
      .def_property_readonly(
          "alphabet", [](const WeightedAutomaton& a) { return a.alphabet; })
      .def("num_states", &WeightedAutomaton::num_states)
      .def("evaluate",
           [](const WeightedAutomaton& a, const py::object& word) {
             Word w = as_word(a, word);
             return evaluate(a, std::span<const std::string>(w));
           })
      .def("evaluate_periodic",
           [](const WeightedAutomaton& a, const py::object& word) {
             Word w = as_word(a, word);
             return evaluate_periodic(a, std::span<const std::string>(w));
           })
      .def("is_deterministic",
           [](const WeightedAutomaton& a) { return is_deterministic(a); })
      .def("to_dot", [](const WeightedAutomaton& a) { return to_dot(a); })
      .def("to_spec_text",
           [](const WeightedAutomaton& a) { return to_spec_text(a); });

  m.def("sum_automata", &sum, py::arg("a"), py::arg("b"));
  m.def("scale_automaton", &scale, py::arg("a"), py::arg("c"));

  py::class_<MatrixProductState>(m, "MatrixProductState")
      .def_static("random", &MatrixProductState::random, py::arg("n_sites"),
                  py::arg("phys_dim"), py::arg("bond"), py::arg("seed"),
                  py::arg("boundary") = Boundary::open)
      .def("length", &MatrixProductState::length)
      .def("bond_extent", &MatrixProductState::bond_extent)
      .def("amplitude",
           [](const MatrixProductState& s, const std::vector<std::size_t>& c) {
             return amplitude(s, std::span<const std::size_t>(c));
           });

  py::class_<MatrixProductOperator>(m, "MatrixProductOperator")
      .def_static("identity", &MatrixProductOperator::identity,
                  py::arg("n_sites"), py::arg("phys_dim"),
                  py::arg("boundary") = Boundary::open)
      .def("length", &MatrixProductOperator::length)
      .def("bond_extent", &MatrixProductOperator::bond_extent);

  py::class_<CompiledMps>(m, "CompiledMps")
      .def_property_readonly("state", &CompiledMps::state)
      .def("word_weight", [](const CompiledMps& c, const Word& w) {
        return c.word_weight(std::span<const std::string>(w));
      });

  py::class_<CompiledMpo>(m, "CompiledMpo")
      .def_property_readonly("op", &CompiledMpo::op)
      .def("word_weight", [](const CompiledMpo& c, const Word& w) {
        return c.word_weight(std::span<const std::string>(w));
      });

  m.def("unroll_mps", &unroll_mps, py::arg("automaton"), py::arg("n_sites"));
  m.def("unroll_mpo", &unroll_mpo, py::arg("automaton"), py::arg("n_sites"));
  m.def("unroll_periodic_mps", &unroll_periodic_mps);
  m.def("unroll_periodic_mpo", &unroll_periodic_mpo);
  m.def("edit_site", &edit_site, py::arg("mpo"), py::arg("site"),
        py::arg("from_symbol"), py::arg("to_symbol"));

  m.def("inner", &inner);
  m.def("expectation", &expectation);
  m.def("apply_gauge", &apply_gauge);
  m.def("compress_bond", &compress_bond);

  m.def("dense_state", &oracle::dense_state);
  m.def("dense_operator", &oracle::dense_operator);
  m.def("exact_ground", [](const Matrix& h) {
    auto gs = oracle::exact_ground(h);
    return py::make_tuple(gs.energy, gs.vector);
  });

  m.def(
      "sweep",
      [](const MatrixProductOperator& h, const MatrixProductState& s0,
         std::size_t max_sweeps, double tol) {
        SweepResult result = sweep(h, s0, max_sweeps, tol);
        return py::make_tuple(result.state, report_dict(result.report));
      },
      py::arg("h"), py::arg("s0"), py::arg("max_sweeps") = 20,
      py::arg("tol") = 1e-10);

  py::class_<SignalingAgent>(m, "SignalingAgent")
      .def_property_readonly(
          "signal_names",
          [](const SignalingAgent& a) { return a.signal_names; })
      .def("num_signals", &SignalingAgent::num_signals)
      .def("num_transitions",
           [](const SignalingAgent& a) { return a.transitions.size(); })
      .def("to_spec_text",
           [](const SignalingAgent& a) { return to_spec_text(a); });

  py::class_<GridOperator>(m, "GridOperator")
      .def("rows", &GridOperator::rows)
      .def("cols", &GridOperator::cols);

  m.def("four_x_agent", &four_x_agent);
  m.def("compile_grid", &compile_grid, py::arg("agent"), py::arg("rows"),
        py::arg("cols"));
  m.def("grid_weight", &grid_weight);
  m.def("enumerate_grid", &enumerate_grid);
  m.def("dense_grid_operator", &dense_grid_operator);
  m.def("snake_automaton_four_x", &snake_automaton_four_x);

  m.def("parse_spec", [](const std::string& text) -> py::object {
    ParsedSpec spec = parse_spec(text);
    if (auto* a = std::get_if<WeightedAutomaton>(&spec)) return py::cast(*a);
    return py::cast(std::get<SignalingAgent>(spec));
  });

  auto models_mod = m.def_submodule("models", "example automata");
  models_mod.def("w_state", &models::w_state_automaton);
  models_mod.def("cat_state", &models::cat_state_automaton);
  models_mod.def("neighbor_state", &models::neighbor_state_automaton);
  models_mod.def("neighbor_xx", &models::neighbor_xx_automaton);
  models_mod.def("field_z", &models::field_z_automaton);
  models_mod.def("ends_in_two_dfa", &models::ends_in_two_dfa);
  models_mod.def("unit", &models::unit_automaton);
  models_mod.def("ising", &models::ising_automaton, py::arg("g"));
}
