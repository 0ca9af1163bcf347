#pragma once

#include <map>

#include "automps/automaton.hpp"
#include "automps/mp_state.hpp"

namespace automps::oracle {

/// Fully contracted state vector of length d^n, row-major over site indices.
/// Guarded at n <= 16.
Vector dense_state(const MatrixProductState& s);

/// Fully contracted d^n x d^n operator matrix. Guarded at n <= 10.
Matrix dense_operator(const MatrixProductOperator& m);

struct GroundState {
  double energy;
  Vector vector;
};

/// Minimum eigenpair by full diagonalization; requires Hermitian input.
GroundState exact_ground(const Matrix& h_dense);

/// The automaton's output on every word of length n. Guarded at
/// |alphabet|^n <= 2^20.
std::map<Word, Complex> enumerate_words(const WeightedAutomaton& a,
                                        std::size_t n);

/// All words of the given length over an alphabet, in lexicographic order of
/// symbol indices.
std::vector<Word> all_words(const std::vector<std::string>& alphabet,
                            std::size_t n);

}  // namespace automps::oracle
