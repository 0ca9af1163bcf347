#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "automps/automaton.hpp"
#include "automps/mp_state.hpp"

namespace automps {

/// One nondeterministic reaction of a grid-site agent: on the given incoming
/// (up, left) signals and symbol, emit (right, down) signals with a weight.
struct AgentTransition {
  std::size_t up = 0;
  std::size_t left = 0;
  std::string symbol;
  std::size_t right = 0;
  std::size_t down = 0;
  Complex weight{1.0, 0.0};
};

/// Vertex rule for a rectangular grid. Signals flow in from up/left and out
/// to right/down; the top and left boundaries carry the initial signal, and
/// the bottom and right boundary channels must emit a final signal.
struct SignalingAgent {
  std::vector<std::string> signal_names;
  std::vector<AgentTransition> transitions;
  SymbolTable symbols;
  std::size_t initial_signal = 0;
  std::vector<std::size_t> final_signals;

  std::size_t num_signals() const { return signal_names.size(); }
  std::size_t signal_index(const std::string& name) const;
  bool is_final(std::size_t signal) const;
  void validate() const;
};

/// The five-signal, eight-transition agent that recognizes a single 2x2
/// block of X operators on an identity background.
SignalingAgent four_x_agent();

/// Grid coordinates are (row, col), 0-based, row 0 at the top.
using SymbolGrid = std::vector<std::vector<std::string>>;

/// A signaling agent compiled onto a rows x cols grid: one rank-6 tensor per
/// vertex (four channel indices, two physical indices), with the boundary
/// conditions absorbed into extent-1 boundary channels.
class GridOperator {
 public:
  GridOperator(SignalingAgent agent, std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t phys_dim() const { return agent_.symbols.dim(); }
  const SignalingAgent& agent() const { return agent_; }

  /// Rank-6 vertex tensor with labels (up, left, down, right, phys row,
  /// phys col).
  const Tensor& site(std::size_t i, std::size_t j) const;
  /// Per-symbol channel blocks (up, left, down, right) at a vertex; the
  /// vertex tensor is their symbol-realization-weighted sum.
  const std::vector<std::pair<std::string, Tensor>>& channel_blocks(
      std::size_t i, std::size_t j) const;

  std::string up_label(std::size_t i, std::size_t j) const;
  std::string down_label(std::size_t i, std::size_t j) const;
  std::string left_label(std::size_t i, std::size_t j) const;
  std::string right_label(std::size_t i, std::size_t j) const;
  std::string phys_row_label(std::size_t i, std::size_t j) const;
  std::string phys_col_label(std::size_t i, std::size_t j) const;

 private:
  SignalingAgent agent_;
  std::size_t rows_, cols_;
  std::vector<Tensor> sites_;
  std::vector<std::vector<std::pair<std::string, Tensor>>> blocks_;
};

GridOperator compile_grid(const SignalingAgent& agent, std::size_t rows,
                          std::size_t cols);

/// Weight the compiled grid assigns to one symbol configuration: the channel
/// network contracted with the physical choice fixed.
Complex grid_weight(const GridOperator& g, const SymbolGrid& config);

/// Every configuration with nonzero weight, by exhaustive enumeration.
/// Guarded at |alphabet|^(rows*cols) <= 2^20.
std::vector<std::pair<SymbolGrid, Complex>> enumerate_grid(
    const GridOperator& g);

/// Sum over configurations of weight times the tensor product of the local
/// operators, as a dense d^(rows*cols) square matrix. Guarded at
/// d^(rows*cols) <= 4096.
Matrix dense_grid_operator(const GridOperator& g);

/// Grid of rank-5 site tensors (up, left, down, right, phys); boundary bonds
/// have extent 1. A product state is the bond-extent-1 case.
class PepsState {
 public:
  PepsState(std::vector<std::vector<Tensor>> sites, std::size_t phys_dim);

  static PepsState product(std::size_t rows, std::size_t cols,
                           const std::vector<std::vector<Vector>>& kets);
  static PepsState random_product(std::size_t rows, std::size_t cols,
                                  std::size_t phys_dim, std::uint64_t seed);
  static PepsState random(std::size_t rows, std::size_t cols,
                          std::size_t phys_dim, std::size_t bond,
                          std::uint64_t seed);

  std::size_t rows() const { return sites_.size(); }
  std::size_t cols() const { return sites_.empty() ? 0 : sites_[0].size(); }
  std::size_t phys_dim() const { return phys_dim_; }
  const Tensor& site(std::size_t i, std::size_t j) const;

  std::string up_label(std::size_t i, std::size_t j) const;
  std::string down_label(std::size_t i, std::size_t j) const;
  std::string left_label(std::size_t i, std::size_t j) const;
  std::string right_label(std::size_t i, std::size_t j) const;
  std::string phys_label(std::size_t i, std::size_t j) const;

  /// Exactly contracted coefficient vector, row-major over site indices.
  Vector dense() const;

 private:
  std::vector<std::vector<Tensor>> sites_;
  std::size_t phys_dim_;
};

/// Cached 2D environments for <bra| g |ket> built from the row/column
/// recursion: row partials accumulate left/right within a row, full-row
/// transfers stack top-down (L) and bottom-up (R).
class Env2d {
 public:
  Env2d(const GridOperator& g, const PepsState& bra, const PepsState& ket);

  /// Site transfer tensor with composite channels (bra, op, ket fused).
  const Tensor& site_transfer(std::size_t i, std::size_t j);

  /// Environment around (i, j): everything contracted except that site's
  /// transfer tensor. Labels: composite up/left/down/right of the site.
  Tensor environment(std::size_t i, std::size_t j);

  /// environment(i, j) closed with site_transfer(i, j): the full sandwich.
  Complex expectation_at(std::size_t i, std::size_t j);

  struct Counts {
    std::uint64_t row_left = 0;    // A entries
    std::uint64_t row_right = 0;   // B entries
    std::uint64_t row_full = 0;    // C entries
    std::uint64_t stack_down = 0;  // L entries
    std::uint64_t stack_up = 0;    // R entries
  };
  Counts counts() const { return counts_; }

 private:
  Tensor ones(const std::vector<std::string>& labels,
              const std::vector<std::size_t>& dims) const;
  const Tensor& row_left(std::size_t i, std::size_t j);    // A(i, j)
  const Tensor& row_right(std::size_t i, std::size_t j);   // B(i, j)
  const Tensor& row_full(std::size_t i);                   // C(i)
  const Tensor& stack_down(std::size_t i);                 // L(i)
  const Tensor& stack_up(std::size_t i);                   // R(i)
  std::string w_label(std::size_t i, std::size_t j) const;
  std::string g_label(std::size_t i, std::size_t j) const;

  const GridOperator* g_;
  const PepsState* bra_;
  const PepsState* ket_;
  std::size_t rows_, cols_;
  std::vector<std::vector<std::optional<Tensor>>> transfer_;
  std::vector<std::vector<std::optional<Tensor>>> a_, b_;
  std::vector<std::optional<Tensor>> c_, l_, r_;
  Counts counts_;
};

/// One-shot environment with a fresh cache.
Tensor env2d(const GridOperator& g, const PepsState& bra, const PepsState& ket,
             std::size_t i, std::size_t j);

/// <bra| g |ket> contracted from scratch.
Complex expectation2d(const GridOperator& g, const PepsState& bra,
                      const PepsState& ket);

/// The 1D automaton over the row-major ordering of a cols-wide grid that
/// recognizes the same 2x2 block-of-X pattern as four_x_agent. Its state
/// count grows linearly with cols.
WeightedAutomaton snake_automaton_four_x(std::size_t cols);

}  // namespace automps
