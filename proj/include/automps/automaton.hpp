#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "automps/tensor.hpp"

namespace automps {

enum class SymbolKind { state, op };

/// Maps symbol names to their physical realization: a local ket for state
/// automata, a local operator matrix for operator automata.
class SymbolTable {
 public:
  SymbolTable(SymbolKind kind, std::size_t dim);

  void add_ket(const std::string& name, Vector ket);
  void add_matrix(const std::string& name, Matrix m);

  SymbolKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  bool contains(const std::string& name) const;
  const Vector& ket(const std::string& name) const;
  const Matrix& matrix(const std::string& name) const;
  const std::vector<std::string>& names() const { return names_; }

  bool operator==(const SymbolTable& other) const;

 private:
  SymbolKind kind_;
  std::size_t dim_;
  std::vector<std::string> names_;
  std::map<std::string, Vector> kets_;
  std::map<std::string, Matrix> matrices_;
};

using Word = std::vector<std::string>;

/// Complex-weighted finite automaton (Q, Sigma, W, alpha, Omega) together
/// with the physical realization of its alphabet.
struct WeightedAutomaton {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::map<std::string, Matrix> weights;  // per symbol, |Q| x |Q|
  RowVector initial;                      // alpha, 1 x |Q|
  Vector final;                           // Omega, |Q| x 1
  SymbolTable symbols;

  std::size_t num_states() const { return states.size(); }
  const Matrix& weight(const std::string& symbol) const;
  void validate() const;
};

/// alpha . W_{a0} ... W_{aN} . Omega
Complex evaluate(const WeightedAutomaton& a, std::span<const std::string> word);
/// tr(W_{a0} ... W_{aN})
Complex evaluate_periodic(const WeightedAutomaton& a,
                          std::span<const std::string> word);

/// Split a string into a word, one symbol per character. Requires every
/// alphabet symbol of a to be a single character.
Word word_from_chars(const WeightedAutomaton& a, const std::string& text);

Complex evaluate(const WeightedAutomaton& a, const std::string& word_chars);
Complex evaluate_periodic(const WeightedAutomaton& a,
                          const std::string& word_chars);

/// Direct sum: outputs add pointwise over every word.
WeightedAutomaton sum(const WeightedAutomaton& a, const WeightedAutomaton& b);

/// Scales every output by c (implemented on the initial distribution).
WeightedAutomaton scale(const WeightedAutomaton& a, Complex c);

/// True iff all weights and boundary entries are 0/1 and every row of every
/// weight matrix, as well as the initial distribution, has exactly one
/// nonzero entry.
bool is_deterministic(const WeightedAutomaton& a);

/// GraphViz rendering: one node per state, one edge per nonzero weight entry
/// labeled "symbol/weight", plus start/accept marks.
std::string to_dot(const WeightedAutomaton& a);

}  // namespace automps
