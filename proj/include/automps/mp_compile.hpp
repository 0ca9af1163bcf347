#pragma once

#include <variant>

#include "automps/automaton.hpp"
#include "automps/mp_state.hpp"

namespace automps {

/// One unrolled site: the automaton's weight matrices specialized to this
/// position, with the boundary distributions absorbed into the end sites.
struct SiteBlocks {
  std::vector<std::pair<std::string, Matrix>> blocks;  // symbol -> bond block

  const Matrix& block(const std::string& symbol) const;
  bool has_nonzero(const std::string& symbol) const;
};

/// A state automaton unrolled over a fixed number of sites. Keeps both the
/// realized tensor chain and the per-symbol bond blocks it was built from.
class CompiledMps {
 public:
  CompiledMps(std::vector<SiteBlocks> sites, SymbolTable symbols,
              Boundary boundary);

  const MatrixProductState& state() const { return state_; }
  const std::vector<SiteBlocks>& sites() const { return site_blocks_; }
  const SymbolTable& symbols() const { return symbols_; }

  /// The weight the chain assigns to one symbol word: the chain product of
  /// the selected bond blocks. Matches the source automaton's evaluation.
  Complex word_weight(std::span<const std::string> word) const;

 private:
  std::vector<SiteBlocks> site_blocks_;
  SymbolTable symbols_;
  MatrixProductState state_;
};

/// Operator analog of CompiledMps.
class CompiledMpo {
 public:
  CompiledMpo(std::vector<SiteBlocks> sites, SymbolTable symbols,
              Boundary boundary);

  const MatrixProductOperator& op() const { return op_; }
  const std::vector<SiteBlocks>& sites() const { return site_blocks_; }
  const SymbolTable& symbols() const { return symbols_; }

  Complex word_weight(std::span<const std::string> word) const;

 private:
  std::vector<SiteBlocks> site_blocks_;
  SymbolTable symbols_;
  MatrixProductOperator op_;
};

using Compiled = std::variant<CompiledMps, CompiledMpo>;

/// Unrolls an automaton over n sites: one copy of the weight matrices per
/// site, with the initial distribution absorbed into the first site and the
/// final distribution into the last. Every word of length n keeps the weight
/// the automaton assigns to it.
Compiled unroll(const WeightedAutomaton& a, std::size_t n_sites);
CompiledMps unroll_mps(const WeightedAutomaton& a, std::size_t n_sites);
CompiledMpo unroll_mpo(const WeightedAutomaton& a, std::size_t n_sites);

/// Periodic variant: no boundary absorption; evaluation closes the chain
/// with a trace.
Compiled unroll_periodic(const WeightedAutomaton& a, std::size_t n_sites);
CompiledMps unroll_periodic_mps(const WeightedAutomaton& a,
                                std::size_t n_sites);
CompiledMpo unroll_periodic_mpo(const WeightedAutomaton& a,
                                std::size_t n_sites);

/// Re-realizes every edge labeled from_symbol at one site (0-based) with
/// to_symbol's matrix. Bond structure is unchanged.
CompiledMpo edit_site(const CompiledMpo& m, std::size_t site,
                      const std::string& from_symbol,
                      const std::string& to_symbol);

}  // namespace automps
