#pragma once

#include "automps/automaton.hpp"

namespace automps::models {

/// Spin-1/2 state symbols: "0" (up) and "1" (down) mapped to basis kets.
SymbolTable spin_state_symbols();

/// Operator symbols over spin-1/2: I, X, X2, Z. X and X2 both realize the
/// Pauli X matrix; the distinct names make the two halves of a coupling pair
/// addressable when editing a compiled operator site.
SymbolTable spin_operator_symbols();

/// One-state automaton whose output is 1 on every word.
WeightedAutomaton unit_automaton(SymbolKind kind);

/// Recognizes words with exactly one "1": the W-state pattern.
WeightedAutomaton w_state_automaton();

/// Recognizes the all-"0" and all-"1" words: the cat-state pattern.
WeightedAutomaton cat_state_automaton();

/// Recognizes words with exactly two adjacent "1"s.
WeightedAutomaton neighbor_state_automaton();

/// Operator pattern I..I X X2 I..I summed over positions: the
/// nearest-neighbor XX coupling.
WeightedAutomaton neighbor_xx_automaton();

/// Operator pattern I..I Z I..I summed over positions: a uniform magnetic
/// field in z.
WeightedAutomaton field_z_automaton();

/// Five-state DFA accepting words that end in two equal symbols ("00" or
/// "11").
WeightedAutomaton ends_in_two_dfa();

/// Transverse-field Ising Hamiltonian -sum XX - g sum Z as a direct sum of
/// scaled coupling and field automata.
WeightedAutomaton ising_automaton(double g);

}  // namespace automps::models
