#include "automps/mp_compile.hpp"

#include "automps/errors.hpp"

namespace automps {

const Matrix& SiteBlocks::block(const std::string& symbol) const {
  for (const auto& [name, m] : blocks)
    if (name == symbol) return m;
  throw SymbolError("site has no block for symbol '" + symbol + "'");
}

bool SiteBlocks::has_nonzero(const std::string& symbol) const {
  for (const auto& [name, m] : blocks)
    if (name == symbol) return !m.isZero(0.0);
  return false;
}

namespace {

std::vector<SiteBlocks> unrolled_blocks(const WeightedAutomaton& a,
                                        std::size_t n_sites, bool absorb) {
  if (n_sites < 1) throw SizeError("unroll: need at least one site");
  a.validate();
  std::vector<SiteBlocks> sites(n_sites);
  for (std::size_t k = 0; k < n_sites; ++k) {
    for (const auto& sym : a.alphabet) {
      Matrix w = a.weight(sym);
      if (absorb && k == 0) w = a.initial * w;
      if (absorb && k + 1 == n_sites) w = w * a.final;
      sites[k].blocks.emplace_back(sym, std::move(w));
    }
  }
  return sites;
}

Tensor realize_mps_site(const SiteBlocks& site, const SymbolTable& symbols,
                        std::size_t k) {
  const auto& first = site.blocks.front().second;
  std::size_t l = static_cast<std::size_t>(first.rows());
  std::size_t r = static_cast<std::size_t>(first.cols());
  std::size_t d = symbols.dim();
  Tensor t({bond_label(k), phys_label(k), bond_label(k + 1)}, {l, d, r});
  for (const auto& [sym, w] : site.blocks) {
    const Vector& ket = symbols.ket(sym);
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        Complex wij = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (wij == Complex(0.0)) continue;
        for (std::size_t p = 0; p < d; ++p)
          t.at(std::vector<std::size_t>{i, p, j}) +=
              wij * ket(static_cast<Eigen::Index>(p));
      }
  }
  return t;
}

Tensor realize_mpo_site(const SiteBlocks& site, const SymbolTable& symbols,
                        std::size_t k) {
  const auto& first = site.blocks.front().second;
  std::size_t l = static_cast<std::size_t>(first.rows());
  std::size_t r = static_cast<std::size_t>(first.cols());
  std::size_t d = symbols.dim();
  Tensor t({bond_label(k), row_label(k), col_label(k), bond_label(k + 1)},
           {l, d, d, r});
  for (const auto& [sym, w] : site.blocks) {
    const Matrix& m = symbols.matrix(sym);
    for (std::size_t i = 0; i < l; ++i)
      for (std::size_t j = 0; j < r; ++j) {
        Complex wij = w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (wij == Complex(0.0)) continue;
        for (std::size_t pr = 0; pr < d; ++pr)
          for (std::size_t pc = 0; pc < d; ++pc)
            t.at(std::vector<std::size_t>{i, pr, pc, j}) +=
                wij * m(static_cast<Eigen::Index>(pr),
                        static_cast<Eigen::Index>(pc));
      }
  }
  return t;
}

Complex blocks_word_weight(const std::vector<SiteBlocks>& sites,
                           std::span<const std::string> word,
                           Boundary boundary) {
  if (word.size() != sites.size())
    throw ShapeError("word_weight: word length != number of sites");
  Matrix m = sites[0].block(word[0]);
  for (std::size_t k = 1; k < sites.size(); ++k)
    m = m * sites[k].block(word[k]);
  if (boundary == Boundary::periodic) return m.trace();
  return m(0, 0);
}

}  // namespace

CompiledMps::CompiledMps(std::vector<SiteBlocks> sites, SymbolTable symbols,
                         Boundary boundary)
    : site_blocks_(std::move(sites)),
      symbols_(std::move(symbols)),
      state_(
          [&] {
            std::vector<Tensor> tensors;
            tensors.reserve(site_blocks_.size());
            for (std::size_t k = 0; k < site_blocks_.size(); ++k)
              tensors.push_back(
                  realize_mps_site(site_blocks_[k], symbols_, k));
            return tensors;
          }(),
          symbols_.dim(), boundary) {}

Complex CompiledMps::word_weight(std::span<const std::string> word) const {
  return blocks_word_weight(site_blocks_, word, state_.boundary());
}

CompiledMpo::CompiledMpo(std::vector<SiteBlocks> sites, SymbolTable symbols,
                         Boundary boundary)
    : site_blocks_(std::move(sites)),
      symbols_(std::move(symbols)),
      op_(
          [&] {
            std::vector<Tensor> tensors;
            tensors.reserve(site_blocks_.size());
            for (std::size_t k = 0; k < site_blocks_.size(); ++k)
              tensors.push_back(
                  realize_mpo_site(site_blocks_[k], symbols_, k));
            return tensors;
          }(),
          symbols_.dim(), boundary) {}

Complex CompiledMpo::word_weight(std::span<const std::string> word) const {
  return blocks_word_weight(site_blocks_, word, op_.boundary());
}

Compiled unroll(const WeightedAutomaton& a, std::size_t n_sites) {
  if (a.symbols.kind() == SymbolKind::state)
    return unroll_mps(a, n_sites);
  return unroll_mpo(a, n_sites);
}

CompiledMps unroll_mps(const WeightedAutomaton& a, std::size_t n_sites) {
  if (a.symbols.kind() != SymbolKind::state)
    throw SymbolError("unroll_mps: automaton realizes operators");
  return CompiledMps(unrolled_blocks(a, n_sites, true), a.symbols,
                     Boundary::open);
}

CompiledMpo unroll_mpo(const WeightedAutomaton& a, std::size_t n_sites) {
  if (a.symbols.kind() != SymbolKind::op)
    throw SymbolError("unroll_mpo: automaton realizes states");
  return CompiledMpo(unrolled_blocks(a, n_sites, true), a.symbols,
                     Boundary::open);
}

Compiled unroll_periodic(const WeightedAutomaton& a, std::size_t n_sites) {
  if (a.symbols.kind() == SymbolKind::state)
    return unroll_periodic_mps(a, n_sites);
  return unroll_periodic_mpo(a, n_sites);
}

CompiledMps unroll_periodic_mps(const WeightedAutomaton& a,
                                std::size_t n_sites) {
  if (a.symbols.kind() != SymbolKind::state)
    throw SymbolError("unroll_mps: automaton realizes operators");
  return CompiledMps(unrolled_blocks(a, n_sites, false), a.symbols,
                     Boundary::periodic);
}

CompiledMpo unroll_periodic_mpo(const WeightedAutomaton& a,
                                std::size_t n_sites) {
  if (a.symbols.kind() != SymbolKind::op)
    throw SymbolError("unroll_mpo: automaton realizes states");
  return CompiledMpo(unrolled_blocks(a, n_sites, false), a.symbols,
                     Boundary::periodic);
}

CompiledMpo edit_site(const CompiledMpo& m, std::size_t site,
                      const std::string& from_symbol,
                      const std::string& to_symbol) {
  if (site >= m.sites().size()) throw RangeError("edit: site out of range");
  if (!m.symbols().contains(from_symbol) || !m.symbols().contains(to_symbol))
    throw EditError("edit: symbol not in the symbol table");
  if (!m.sites()[site].has_nonzero(from_symbol))
    throw EditError("edit: no edge labeled '" + from_symbol + "' at site " +
                    std::to_string(site));

  std::vector<SiteBlocks> sites = m.sites();
  SiteBlocks& sb = sites[site];
  Matrix moved = sb.block(from_symbol);
  bool to_present = false;
  for (auto& [name, w] : sb.blocks) {
    if (name == from_symbol) w.setZero();
    if (name == to_symbol) to_present = true;
  }
  if (!to_present)
    sb.blocks.emplace_back(to_symbol,
                           Matrix::Zero(moved.rows(), moved.cols()));
  for (auto& [name, w] : sb.blocks)
    if (name == to_symbol) w += moved;
  return CompiledMpo(std::move(sites), m.symbols(), m.op().boundary());
}

}  // namespace automps
