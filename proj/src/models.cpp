#include "automps/models.hpp"

namespace automps::models {

namespace {

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace

SymbolTable spin_state_symbols() {
  SymbolTable t(SymbolKind::state, 2);
  Vector up(2), down(2);
  up << 1, 0;
  down << 0, 1;
  t.add_ket("0", up);
  t.add_ket("1", down);
  return t;
}

SymbolTable spin_operator_symbols() {
  SymbolTable t(SymbolKind::op, 2);
  t.add_matrix("I", Matrix::Identity(2, 2));
  t.add_matrix("X", pauli_x());
  t.add_matrix("X2", pauli_x());
  t.add_matrix("Z", pauli_z());
  return t;
}

WeightedAutomaton unit_automaton(SymbolKind kind) {
  SymbolTable symbols =
      kind == SymbolKind::state ? SymbolTable(SymbolKind::state, 2)
                                : SymbolTable(SymbolKind::op, 2);
  std::string name;
  if (kind == SymbolKind::state) {
    Vector up(2);
    up << 1, 0;
    symbols.add_ket("0", up);
    name = "0";
  } else {
    symbols.add_matrix("I", Matrix::Identity(2, 2));
    name = "I";
  }
  WeightedAutomaton a{.states = {"A"},
                      .alphabet = {name},
                      .weights = {{name, Matrix::Ones(1, 1)}},
                      .initial = RowVector::Ones(1),
                      .final = Vector::Ones(1),
                      .symbols = symbols};
  a.validate();
  return a;
}

WeightedAutomaton w_state_automaton() {
  Matrix w0(2, 2), w1(2, 2);
  w0 << 1, 0, 0, 1;
  w1 << 0, 1, 0, 0;
  WeightedAutomaton a{.states = {"A", "B"},
                      .alphabet = {"0", "1"},
                      .weights = {{"0", w0}, {"1", w1}},
                      .initial = RowVector(2),
                      .final = Vector(2),
                      .symbols = spin_state_symbols()};
  a.initial << 1, 0;
  a.final << 0, 1;
  a.validate();
  return a;
}

WeightedAutomaton cat_state_automaton() {
  Matrix w0(2, 2), w1(2, 2);
  w0 << 1, 0, 0, 0;
  w1 << 0, 0, 0, 1;
  WeightedAutomaton a{.states = {"U", "D"},
                      .alphabet = {"0", "1"},
                      .weights = {{"0", w0}, {"1", w1}},
                      .initial = RowVector(2),
                      .final = Vector(2),
                      .symbols = spin_state_symbols()};
  a.initial << 1, 1;
  a.final << 1, 1;
  a.validate();
  return a;
}

WeightedAutomaton neighbor_state_automaton() {
  Matrix w0 = Matrix::Zero(3, 3), w1 = Matrix::Zero(3, 3);
  w0(0, 0) = 1;  // before the pair
  w0(2, 2) = 1;  // after the pair
  w1(0, 1) = 1;  // first 1
  w1(1, 2) = 1;  // second 1
  WeightedAutomaton a{.states = {"A", "B", "C"},
                      .alphabet = {"0", "1"},
                      .weights = {{"0", w0}, {"1", w1}},
                      .initial = RowVector(3),
                      .final = Vector(3),
                      .symbols = spin_state_symbols()};
  a.initial << 1, 0, 0;
  a.final << 0, 0, 1;
  a.validate();
  return a;
}

WeightedAutomaton neighbor_xx_automaton() {
  Matrix wi = Matrix::Zero(3, 3), wx = Matrix::Zero(3, 3),
         wx2 = Matrix::Zero(3, 3);
  wi(0, 0) = 1;
  wi(2, 2) = 1;
  wx(0, 1) = 1;
  wx2(1, 2) = 1;
  WeightedAutomaton a{.states = {"A", "B", "C"},
                      .alphabet = {"I", "X", "X2"},
                      .weights = {{"I", wi}, {"X", wx}, {"X2", wx2}},
                      .initial = RowVector(3),
                      .final = Vector(3),
                      .symbols = spin_operator_symbols()};
  a.initial << 1, 0, 0;
  a.final << 0, 0, 1;
  a.validate();
  return a;
}

WeightedAutomaton field_z_automaton() {
  Matrix wi = Matrix::Zero(2, 2), wz = Matrix::Zero(2, 2);
  wi(0, 0) = 1;
  wi(1, 1) = 1;
  wz(0, 1) = 1;
  WeightedAutomaton a{.states = {"A", "B"},
                      .alphabet = {"I", "Z"},
                      .weights = {{"I", wi}, {"Z", wz}},
                      .initial = RowVector(2),
                      .final = Vector(2),
                      .symbols = spin_operator_symbols()};
  a.initial << 1, 0;
  a.final << 0, 1;
  a.validate();
  return a;
}

WeightedAutomaton ends_in_two_dfa() {
  // A = start, B/D = one trailing 0/1, C/E = two or more trailing 0s/1s.
  Matrix w0 = Matrix::Zero(5, 5), w1 = Matrix::Zero(5, 5);
  enum { A, B, C, D, E };
  w0(A, B) = 1;
  w0(B, C) = 1;
  w0(C, C) = 1;
  w0(D, B) = 1;
  w0(E, B) = 1;
  w1(A, D) = 1;
  w1(B, D) = 1;
  w1(C, D) = 1;
  w1(D, E) = 1;
  w1(E, E) = 1;
  WeightedAutomaton a{.states = {"A", "B", "C", "D", "E"},
                      .alphabet = {"0", "1"},
                      .weights = {{"0", w0}, {"1", w1}},
                      .initial = RowVector(5),
                      .final = Vector(5),
                      .symbols = spin_state_symbols()};
  a.initial << 1, 0, 0, 0, 0;
  a.final << 0, 0, 1, 0, 1;
  a.validate();
  return a;
}

WeightedAutomaton ising_automaton(double g) {
  WeightedAutomaton coupling = scale(neighbor_xx_automaton(), Complex(-1.0));
  WeightedAutomaton field = scale(field_z_automaton(), Complex(-g));
  // The two factors advertise different alphabets; extend both to the full
  // operator alphabet with zero weight matrices before summing.
  auto extend = [](WeightedAutomaton a) {
    const auto q = static_cast<Eigen::Index>(a.num_states());
    for (const auto& name : {"I", "X", "X2", "Z"})
      if (a.weights.find(name) == a.weights.end()) {
        a.alphabet.push_back(name);
        a.weights.emplace(name, Matrix::Zero(q, q));
      }
    std::sort(a.alphabet.begin(), a.alphabet.end());
    return a;
  };
  return sum(extend(coupling), extend(field));
}

}  // namespace automps::models
