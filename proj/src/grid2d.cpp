#include "automps/grid2d.hpp"

#include <algorithm>
#include <cmath>

#include "automps/errors.hpp"

namespace automps {

namespace {

std::string idx2(const char* stem, std::size_t i, std::size_t j) {
  return std::string(stem) + std::to_string(i) + "_" + std::to_string(j);
}

SymbolTable grid_operator_symbols() {
  SymbolTable t(SymbolKind::op, 2);
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  t.add_matrix("I", Matrix::Identity(2, 2));
  t.add_matrix("X", x);
  return t;
}

}  // namespace

std::size_t SignalingAgent::signal_index(const std::string& name) const {
  auto it = std::find(signal_names.begin(), signal_names.end(), name);
  if (it == signal_names.end())
    throw SymbolError("unknown signal '" + name + "'");
  return static_cast<std::size_t>(it - signal_names.begin());
}

bool SignalingAgent::is_final(std::size_t signal) const {
  return std::find(final_signals.begin(), final_signals.end(), signal) !=
         final_signals.end();
}

void SignalingAgent::validate() const {
  const std::size_t s = num_signals();
  if (s == 0) throw PreconditionError("agent: no signals");
  if (symbols.kind() != SymbolKind::op)
    throw SymbolError("agent: symbol table must hold operators");
  if (initial_signal >= s) throw RangeError("agent: initial signal undefined");
  for (auto f : final_signals)
    if (f >= s) throw RangeError("agent: final signal undefined");
  for (const auto& t : transitions) {
    if (t.up >= s || t.left >= s || t.right >= s || t.down >= s)
      throw RangeError("agent: transition references an undefined signal");
    if (!symbols.contains(t.symbol))
      throw SymbolError("agent: transition symbol '" + t.symbol +
                        "' has no realization");
    if (t.weight == Complex(0.0))
      throw PreconditionError("agent: transition weight must be nonzero");
  }
}

SignalingAgent four_x_agent() {
  SignalingAgent a{.signal_names = {"Exterior", "Boundary_wX", "Boundary",
                                    "Interior_wX", "Interior"},
                   .transitions = {},
                   .symbols = grid_operator_symbols(),
                   .initial_signal = 0,
                   .final_signals = {0, 2, 4}};
  enum { Ext = 0, BdX = 1, Bd = 2, IntX = 3, Int = 4 };
  a.transitions = {
      {Ext, Ext, "I", Ext, Ext, 1.0},    // undisturbed exterior
      {Ext, Ext, "X", BdX, BdX, 1.0},    // top-left corner of the block
      {BdX, Ext, "X", IntX, Bd, 1.0},    // bottom-left corner
      {Ext, BdX, "X", Bd, IntX, 1.0},    // top-right corner
      {Ext, Bd, "I", Bd, Int, 1.0},      // boundary continues rightward
      {Bd, Ext, "I", Int, Bd, 1.0},      // boundary continues downward
      {IntX, IntX, "X", Int, Int, 1.0},  // bottom-right corner
      {Int, Int, "I", Int, Int, 1.0},    // interior
  };
  a.validate();
  return a;
}

GridOperator::GridOperator(SignalingAgent agent, std::size_t rows,
                           std::size_t cols)
    : agent_(std::move(agent)), rows_(rows), cols_(cols) {
  if (rows < 1 || cols < 1) throw SizeError("grid: rows and cols must be >= 1");
  agent_.validate();
  const std::size_t s = agent_.num_signals();
  const std::size_t d = agent_.symbols.dim();

  sites_.reserve(rows * cols);
  blocks_.reserve(rows * cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const std::size_t up_ext = i == 0 ? 1 : s;
      const std::size_t left_ext = j == 0 ? 1 : s;
      const std::size_t down_ext = i + 1 == rows ? 1 : s;
      const std::size_t right_ext = j + 1 == cols ? 1 : s;

      std::vector<std::pair<std::string, Tensor>> blocks;
      for (const auto& name : agent_.symbols.names())
        blocks.emplace_back(
            name, Tensor({up_label(i, j), left_label(i, j), down_label(i, j),
                          right_label(i, j)},
                         {up_ext, left_ext, down_ext, right_ext}));

      for (const auto& t : agent_.transitions) {
        // Boundary channels carry only the initial signal (top/left) or a
        // final signal (bottom/right); other transitions drop out.
        std::size_t u = t.up, l = t.left, dn = t.down, r = t.right;
        if (i == 0) {
          if (t.up != agent_.initial_signal) continue;
          u = 0;
        }
        if (j == 0) {
          if (t.left != agent_.initial_signal) continue;
          l = 0;
        }
        if (i + 1 == rows) {
          if (!agent_.is_final(t.down)) continue;
          dn = 0;
        }
        if (j + 1 == cols) {
          if (!agent_.is_final(t.right)) continue;
          r = 0;
        }
        for (auto& [name, block] : blocks)
          if (name == t.symbol)
            block.at(std::vector<std::size_t>{u, l, dn, r}) += t.weight;
      }

      Tensor site({up_label(i, j), left_label(i, j), down_label(i, j),
                   right_label(i, j), phys_row_label(i, j),
                   phys_col_label(i, j)},
                  {up_ext, left_ext, down_ext, right_ext, d, d});
      for (const auto& [name, block] : blocks) {
        const Matrix& m = agent_.symbols.matrix(name);
        for (std::size_t u = 0; u < up_ext; ++u)
          for (std::size_t l = 0; l < left_ext; ++l)
            for (std::size_t dn = 0; dn < down_ext; ++dn)
              for (std::size_t r = 0; r < right_ext; ++r) {
                Complex w = block.at(std::vector<std::size_t>{u, l, dn, r});
                if (w == Complex(0.0)) continue;
                for (std::size_t pr = 0; pr < d; ++pr)
                  for (std::size_t pc = 0; pc < d; ++pc)
                    site.at(std::vector<std::size_t>{u, l, dn, r, pr, pc}) +=
                        w * m(static_cast<Eigen::Index>(pr),
                              static_cast<Eigen::Index>(pc));
              }
      }
      sites_.push_back(std::move(site));
      blocks_.push_back(std::move(blocks));
    }
}

const Tensor& GridOperator::site(std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw RangeError("grid: site out of range");
  return sites_[i * cols_ + j];
}

const std::vector<std::pair<std::string, Tensor>>& GridOperator::channel_blocks(
    std::size_t i, std::size_t j) const {
  if (i >= rows_ || j >= cols_) throw RangeError("grid: site out of range");
  return blocks_[i * cols_ + j];
}

std::string GridOperator::up_label(std::size_t i, std::size_t j) const {
  return idx2("gv", i, j);
}
std::string GridOperator::down_label(std::size_t i, std::size_t j) const {
  return idx2("gv", i + 1, j);
}
std::string GridOperator::left_label(std::size_t i, std::size_t j) const {
  return idx2("gh", i, j);
}
std::string GridOperator::right_label(std::size_t i, std::size_t j) const {
  return idx2("gh", i, j + 1);
}
std::string GridOperator::phys_row_label(std::size_t i, std::size_t j) const {
  return idx2("gr", i, j);
}
std::string GridOperator::phys_col_label(std::size_t i, std::size_t j) const {
  return idx2("gc", i, j);
}

GridOperator compile_grid(const SignalingAgent& agent, std::size_t rows,
                          std::size_t cols) {
  return GridOperator(agent, rows, cols);
}

Complex grid_weight(const GridOperator& g, const SymbolGrid& config) {
  if (config.size() != g.rows())
    throw ShapeError("grid_weight: wrong number of rows");
  for (const auto& row : config)
    if (row.size() != g.cols())
      throw ShapeError("grid_weight: wrong number of columns");

  // Sparse frontier over the channel cut: one down-signal per column plus
  // the horizontal signal entering the current site.
  using Key = std::vector<std::size_t>;
  std::map<Key, Complex> frontier;
  frontier.emplace(Key(g.cols() + 1, 0), Complex(1.0));

  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const std::string& sym = config[i][j];
      const Tensor* block = nullptr;
      for (const auto& [name, b] : g.channel_blocks(i, j))
        if (name == sym) block = &b;
      if (!block) throw SymbolError("grid_weight: unknown symbol '" + sym + "'");

      const auto& dims = block->dims();  // (up, left, down, right)
      std::map<Key, Complex> next;
      for (const auto& [key, weight] : frontier) {
        std::size_t up = key[j], left = key[g.cols()];
        if (up >= dims[0] || left >= dims[1]) continue;
        for (std::size_t dn = 0; dn < dims[2]; ++dn)
          for (std::size_t r = 0; r < dims[3]; ++r) {
            Complex w = block->at(std::vector<std::size_t>{up, left, dn, r});
            if (w == Complex(0.0)) continue;
            Key nk = key;
            nk[j] = dn;
            nk[g.cols()] = r;
            next[nk] += weight * w;
          }
      }
      frontier = std::move(next);
      if (frontier.empty()) return Complex(0.0);
    }

  Complex total(0.0);
  for (const auto& [key, weight] : frontier) total += weight;
  return total;
}

std::vector<std::pair<SymbolGrid, Complex>> enumerate_grid(
    const GridOperator& g) {
  const auto& names = g.agent().symbols.names();
  const std::size_t cells = g.rows() * g.cols();
  double count = std::pow(static_cast<double>(names.size()),
                          static_cast<double>(cells));
  if (count > static_cast<double>(1 << 20))
    throw SizeError("enumerate_grid: alphabet^(rows*cols) exceeds 2^20");

  std::vector<std::pair<SymbolGrid, Complex>> out;
  std::vector<std::size_t> odo(cells, 0);
  SymbolGrid config(g.rows(), std::vector<std::string>(g.cols(), names[0]));
  while (true) {
    Complex w = grid_weight(g, config);
    if (w != Complex(0.0)) out.emplace_back(config, w);
    std::size_t k = cells;
    while (k-- > 0) {
      if (++odo[k] < names.size()) {
        config[k / g.cols()][k % g.cols()] = names[odo[k]];
        break;
      }
      odo[k] = 0;
      config[k / g.cols()][k % g.cols()] = names[0];
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace

Matrix dense_grid_operator(const GridOperator& g) {
  const std::size_t cells = g.rows() * g.cols();
  double dim = std::pow(static_cast<double>(g.phys_dim()),
                        static_cast<double>(cells));
  if (cells > 16 || dim > 4096.0)
    throw SizeError("dense_grid_operator: grid too large to materialize");

  const auto n = static_cast<Eigen::Index>(dim);
  Matrix out = Matrix::Zero(n, n);
  for (const auto& [config, weight] : enumerate_grid(g)) {
    Matrix term = Matrix::Ones(1, 1);
    for (std::size_t i = 0; i < g.rows(); ++i)
      for (std::size_t j = 0; j < g.cols(); ++j)
        term = kron(term, g.agent().symbols.matrix(config[i][j]));
    out += weight * term;
  }
  return out;
}

PepsState::PepsState(std::vector<std::vector<Tensor>> sites,
                     std::size_t phys_dim)
    : sites_(std::move(sites)), phys_dim_(phys_dim) {
  if (sites_.empty() || sites_[0].empty()) throw ShapeError("peps: empty grid");
  const std::size_t r = rows(), c = cols();
  for (std::size_t i = 0; i < r; ++i) {
    if (sites_[i].size() != c) throw ShapeError("peps: ragged grid");
    for (std::size_t j = 0; j < c; ++j) {
      std::vector<std::string> order{up_label(i, j), left_label(i, j),
                                     down_label(i, j), right_label(i, j),
                                     phys_label(i, j)};
      sites_[i][j] = sites_[i][j].transposed(std::span<const std::string>(order));
      if (sites_[i][j].dim(phys_label(i, j)) != phys_dim_)
        throw ShapeError("peps: wrong physical extent");
      if (i == 0 && sites_[i][j].dim(up_label(i, j)) != 1)
        throw ShapeError("peps: top boundary bond must have extent 1");
      if (j == 0 && sites_[i][j].dim(left_label(i, j)) != 1)
        throw ShapeError("peps: left boundary bond must have extent 1");
      if (i + 1 == r && sites_[i][j].dim(down_label(i, j)) != 1)
        throw ShapeError("peps: bottom boundary bond must have extent 1");
      if (j + 1 == c && sites_[i][j].dim(right_label(i, j)) != 1)
        throw ShapeError("peps: right boundary bond must have extent 1");
    }
  }
  for (std::size_t i = 0; i + 1 < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (sites_[i][j].dim(down_label(i, j)) !=
          sites_[i + 1][j].dim(up_label(i + 1, j)))
        throw ShapeError("peps: vertical bond extent mismatch");
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j + 1 < c; ++j)
      if (sites_[i][j].dim(right_label(i, j)) !=
          sites_[i][j + 1].dim(left_label(i, j + 1)))
        throw ShapeError("peps: horizontal bond extent mismatch");
}

PepsState PepsState::product(std::size_t rows, std::size_t cols,
                             const std::vector<std::vector<Vector>>& kets) {
  if (kets.size() != rows) throw ShapeError("peps: wrong number of kets");
  std::size_t d = kets.at(0).at(0).size();
  std::vector<std::vector<Tensor>> sites(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    if (kets[i].size() != cols) throw ShapeError("peps: wrong number of kets");
    for (std::size_t j = 0; j < cols; ++j) {
      Tensor t({idx2("sv", i, j), idx2("sh", i, j), idx2("sv", i + 1, j),
                idx2("sh", i, j + 1), idx2("sp", i, j)},
               {1, 1, 1, 1, d});
      for (std::size_t p = 0; p < d; ++p)
        t.at(std::vector<std::size_t>{0, 0, 0, 0, p}) =
            kets[i][j](static_cast<Eigen::Index>(p));
      sites[i].push_back(std::move(t));
    }
  }
  return PepsState(std::move(sites), d);
}

PepsState PepsState::random_product(std::size_t rows, std::size_t cols,
                                    std::size_t phys_dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<Vector>> kets(rows, std::vector<Vector>());
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      Vector k(static_cast<Eigen::Index>(phys_dim));
      for (Eigen::Index p = 0; p < k.size(); ++p) k(p) = Complex(u(rng), u(rng));
      kets[i].push_back(std::move(k));
    }
  return product(rows, cols, kets);
}

PepsState PepsState::random(std::size_t rows, std::size_t cols,
                            std::size_t phys_dim, std::size_t bond,
                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<Tensor>> sites(rows);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      std::size_t up = i == 0 ? 1 : bond;
      std::size_t left = j == 0 ? 1 : bond;
      std::size_t down = i + 1 == rows ? 1 : bond;
      std::size_t right = j + 1 == cols ? 1 : bond;
      sites[i].push_back(random_tensor(
          {idx2("sv", i, j), idx2("sh", i, j), idx2("sv", i + 1, j),
           idx2("sh", i, j + 1), idx2("sp", i, j)},
          {up, left, down, right, phys_dim}, rng));
    }
  return PepsState(std::move(sites), phys_dim);
}

const Tensor& PepsState::site(std::size_t i, std::size_t j) const {
  if (i >= rows() || j >= cols()) throw RangeError("peps: site out of range");
  return sites_[i][j];
}

std::string PepsState::up_label(std::size_t i, std::size_t j) const {
  return idx2("sv", i, j);
}
std::string PepsState::down_label(std::size_t i, std::size_t j) const {
  return idx2("sv", i + 1, j);
}
std::string PepsState::left_label(std::size_t i, std::size_t j) const {
  return idx2("sh", i, j);
}
std::string PepsState::right_label(std::size_t i, std::size_t j) const {
  return idx2("sh", i, j + 1);
}
std::string PepsState::phys_label(std::size_t i, std::size_t j) const {
  return idx2("sp", i, j);
}

namespace {

// Contract over every label the two tensors share.
Tensor contract_shared(const Tensor& a, const Tensor& b) {
  std::vector<LabelPair> pairs;
  for (const auto& l : a.labels())
    if (b.has_label(l)) pairs.emplace_back(l, l);
  return contract(a, b, std::span<const LabelPair>(pairs));
}

// Drop every extent-1 label, sparing those with the protected prefix.
Tensor squeeze_bonds(Tensor t, const std::string& protected_prefix = "") {
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& l : t.labels()) {
      bool keep = !protected_prefix.empty() && l.rfind(protected_prefix, 0) == 0;
      if (t.dim(l) == 1 && !keep) {
        t = t.sliced(l, 0);
        changed = true;
        break;
      }
    }
  }
  return t;
}

}  // namespace

Vector PepsState::dense() const {
  Tensor f = Tensor::scalar(Complex(1.0));
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j)
      f = contract_shared(f, sites_[i][j]);
  f = squeeze_bonds(std::move(f), "sp");
  std::vector<std::string> order;
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t j = 0; j < cols(); ++j) order.push_back(phys_label(i, j));
  f = f.transposed(std::span<const std::string>(order));
  Vector out(static_cast<Eigen::Index>(f.size()));
  for (std::size_t k = 0; k < f.size(); ++k)
    out(static_cast<Eigen::Index>(k)) = f.data()[k];
  return out;
}

Env2d::Env2d(const GridOperator& g, const PepsState& bra, const PepsState& ket)
    : g_(&g), bra_(&bra), ket_(&ket), rows_(g.rows()), cols_(g.cols()) {
  if (bra.rows() != rows_ || bra.cols() != cols_ || ket.rows() != rows_ ||
      ket.cols() != cols_)
    throw ShapeError("env2d: state grids do not match the operator grid");
  if (bra.phys_dim() != g.phys_dim() || ket.phys_dim() != g.phys_dim())
    throw ShapeError("env2d: physical dimensions differ");
  if (rows_ * cols_ > 16)
    throw SizeError("env2d: grid larger than 16 sites");

  // Estimate the largest row object to keep exact contraction tractable.
  for (std::size_t i = 0; i < rows_; ++i) {
    double entries = 1.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      double up = static_cast<double>(bra.site(i, j).dim(bra.up_label(i, j))) *
                  static_cast<double>(g.site(i, j).dim(g.up_label(i, j))) *
                  static_cast<double>(ket.site(i, j).dim(ket.up_label(i, j)));
      double dn = static_cast<double>(bra.site(i, j).dim(bra.down_label(i, j))) *
                  static_cast<double>(g.site(i, j).dim(g.down_label(i, j))) *
                  static_cast<double>(ket.site(i, j).dim(ket.down_label(i, j)));
      entries *= up * dn;
    }
    if (entries > static_cast<double>(1 << 24))
      throw SizeError("env2d: channel extents exceed the exact-contraction cap");
  }

  transfer_.assign(rows_, std::vector<std::optional<Tensor>>(cols_));
  a_.assign(rows_, std::vector<std::optional<Tensor>>(cols_));
  b_.assign(rows_, std::vector<std::optional<Tensor>>(cols_));
  c_.assign(rows_, std::nullopt);
  l_.assign(rows_, std::nullopt);
  r_.assign(rows_, std::nullopt);
}

std::string Env2d::w_label(std::size_t i, std::size_t j) const {
  return idx2("W", i, j);
}
std::string Env2d::g_label(std::size_t i, std::size_t j) const {
  return idx2("G", i, j);
}

Tensor Env2d::ones(const std::vector<std::string>& labels,
                   const std::vector<std::size_t>& dims) const {
  Tensor t(labels, dims);
  for (auto& v : t.data()) v = Complex(1.0);
  return t;
}

const Tensor& Env2d::site_transfer(std::size_t i, std::size_t j) {
  if (i >= rows_ || j >= cols_) throw RangeError("env2d: site out of range");
  if (transfer_[i][j]) return *transfer_[i][j];

  Tensor bra = bra_->site(i, j).conjugate().renamed(std::vector<LabelPair>{
      {bra_->up_label(i, j), idx2("tv", i, j)},
      {bra_->left_label(i, j), idx2("th", i, j)},
      {bra_->down_label(i, j), idx2("tv", i + 1, j)},
      {bra_->right_label(i, j), idx2("th", i, j + 1)},
      {bra_->phys_label(i, j), g_->phys_row_label(i, j)}});
  Tensor ket = ket_->site(i, j).renamed(
      std::vector<LabelPair>{{ket_->phys_label(i, j), g_->phys_col_label(i, j)}});

  Tensor e = contract(bra, g_->site(i, j),
                      {{g_->phys_row_label(i, j), g_->phys_row_label(i, j)}});
  e = contract(e, ket, {{g_->phys_col_label(i, j), g_->phys_col_label(i, j)}});

  auto fuse = [&](Tensor t, const std::string& b, const std::string& o,
                  const std::string& s, const std::string& fused) {
    std::vector<std::string> group{b, o, s};
    return t.merged(std::span<const std::string>(group), fused);
  };
  e = fuse(std::move(e), idx2("tv", i, j), g_->up_label(i, j),
           ket_->up_label(i, j), w_label(i, j));
  e = fuse(std::move(e), idx2("th", i, j), g_->left_label(i, j),
           ket_->left_label(i, j), g_label(i, j));
  e = fuse(std::move(e), idx2("tv", i + 1, j), g_->down_label(i, j),
           ket_->down_label(i, j), w_label(i + 1, j));
  e = fuse(std::move(e), idx2("th", i, j + 1), g_->right_label(i, j),
           ket_->right_label(i, j), g_label(i, j + 1));
  transfer_[i][j] = std::move(e);
  return *transfer_[i][j];
}

const Tensor& Env2d::row_left(std::size_t i, std::size_t j) {
  if (a_[i][j]) return *a_[i][j];
  if (j == 0) {
    a_[i][0] = ones({g_label(i, 0)}, {site_transfer(i, 0).dim(g_label(i, 0))});
    return *a_[i][0];
  }
  const Tensor& prev = row_left(i, j - 1);
  const Tensor& e = site_transfer(i, j - 1);
  a_[i][j] = contract(prev, e, {{g_label(i, j - 1), g_label(i, j - 1)}});
  counts_.row_left += 1;
  return *a_[i][j];
}

const Tensor& Env2d::row_right(std::size_t i, std::size_t j) {
  if (b_[i][j]) return *b_[i][j];
  if (j + 1 == cols_) {
    b_[i][j] = ones({g_label(i, cols_)},
                    {site_transfer(i, cols_ - 1).dim(g_label(i, cols_))});
    return *b_[i][j];
  }
  const Tensor& prev = row_right(i, j + 1);
  const Tensor& e = site_transfer(i, j + 1);
  b_[i][j] = contract(e, prev, {{g_label(i, j + 2), g_label(i, j + 2)}});
  counts_.row_right += 1;
  return *b_[i][j];
}

const Tensor& Env2d::row_full(std::size_t i) {
  if (c_[i]) return *c_[i];
  const Tensor& a = row_left(i, cols_ - 1);
  const Tensor& e = site_transfer(i, cols_ - 1);
  Tensor t = contract(a, e, {{g_label(i, cols_ - 1), g_label(i, cols_ - 1)}});
  const Tensor& b = row_right(i, cols_ - 1);
  c_[i] = contract(t, b, {{g_label(i, cols_), g_label(i, cols_)}});
  counts_.row_full += 1;
  return *c_[i];
}

const Tensor& Env2d::stack_down(std::size_t i) {
  if (l_[i]) return *l_[i];
  if (i == 0) {
    std::vector<std::string> labels;
    std::vector<std::size_t> dims;
    for (std::size_t j = 0; j < cols_; ++j) {
      labels.push_back(w_label(0, j));
      dims.push_back(site_transfer(0, j).dim(w_label(0, j)));
    }
    l_[0] = ones(labels, dims);
    return *l_[0];
  }
  const Tensor& prev = stack_down(i - 1);
  const Tensor& c = row_full(i - 1);
  std::vector<LabelPair> pairs;
  for (std::size_t j = 0; j < cols_; ++j)
    pairs.emplace_back(w_label(i - 1, j), w_label(i - 1, j));
  l_[i] = contract(prev, c, std::span<const LabelPair>(pairs));
  counts_.stack_down += 1;
  return *l_[i];
}

const Tensor& Env2d::stack_up(std::size_t i) {
  if (r_[i]) return *r_[i];
  if (i + 1 == rows_) {
    std::vector<std::string> labels;
    std::vector<std::size_t> dims;
    for (std::size_t j = 0; j < cols_; ++j) {
      labels.push_back(w_label(rows_, j));
      dims.push_back(site_transfer(rows_ - 1, j).dim(w_label(rows_, j)));
    }
    r_[i] = ones(labels, dims);
    return *r_[i];
  }
  const Tensor& prev = stack_up(i + 1);
  const Tensor& c = row_full(i + 1);
  std::vector<LabelPair> pairs;
  for (std::size_t j = 0; j < cols_; ++j)
    pairs.emplace_back(w_label(i + 2, j), w_label(i + 2, j));
  r_[i] = contract(c, prev, std::span<const LabelPair>(pairs));
  counts_.stack_up += 1;
  return *r_[i];
}

Tensor Env2d::environment(std::size_t i, std::size_t j) {
  if (i >= rows_ || j >= cols_) throw RangeError("env2d: site out of range");
  Tensor t = stack_down(i);
  {
    const Tensor& a = row_left(i, j);
    std::vector<LabelPair> pairs;
    for (std::size_t k = 0; k < j; ++k)
      pairs.emplace_back(w_label(i, k), w_label(i, k));
    t = contract(t, a, std::span<const LabelPair>(pairs));
  }
  {
    const Tensor& b = row_right(i, j);
    std::vector<LabelPair> pairs;
    for (std::size_t k = j + 1; k < cols_; ++k)
      pairs.emplace_back(w_label(i, k), w_label(i, k));
    t = contract(t, b, std::span<const LabelPair>(pairs));
  }
  {
    const Tensor& r = stack_up(i);
    std::vector<LabelPair> pairs;
    for (std::size_t k = 0; k < cols_; ++k)
      if (k != j) pairs.emplace_back(w_label(i + 1, k), w_label(i + 1, k));
    t = contract(t, r, std::span<const LabelPair>(pairs));
  }
  return t;
}

Complex Env2d::expectation_at(std::size_t i, std::size_t j) {
  Tensor env = environment(i, j);
  const Tensor& e = site_transfer(i, j);
  Tensor closed = contract(env, e,
                           {{w_label(i, j), w_label(i, j)},
                            {g_label(i, j), g_label(i, j)},
                            {w_label(i + 1, j), w_label(i + 1, j)},
                            {g_label(i, j + 1), g_label(i, j + 1)}});
  return closed.scalar_value();
}

Tensor env2d(const GridOperator& g, const PepsState& bra, const PepsState& ket,
             std::size_t i, std::size_t j) {
  Env2d cache(g, bra, ket);
  return cache.environment(i, j);
}

Complex expectation2d(const GridOperator& g, const PepsState& bra,
                      const PepsState& ket) {
  if (bra.rows() != g.rows() || ket.rows() != g.rows() ||
      bra.cols() != g.cols() || ket.cols() != g.cols())
    throw ShapeError("expectation2d: grids do not match");
  Tensor f = Tensor::scalar(Complex(1.0));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      Tensor bra_site =
          bra.site(i, j).conjugate().renamed(std::vector<LabelPair>{
              {bra.up_label(i, j), idx2("tv", i, j)},
              {bra.left_label(i, j), idx2("th", i, j)},
              {bra.down_label(i, j), idx2("tv", i + 1, j)},
              {bra.right_label(i, j), idx2("th", i, j + 1)},
              {bra.phys_label(i, j), g.phys_row_label(i, j)}});
      Tensor ket_site = ket.site(i, j).renamed(std::vector<LabelPair>{
          {ket.phys_label(i, j), g.phys_col_label(i, j)}});
      f = contract_shared(f, bra_site);
      f = contract_shared(f, g.site(i, j));
      f = contract_shared(f, ket_site);
    }
  f = squeeze_bonds(std::move(f));
  return f.scalar_value();
}

WeightedAutomaton snake_automaton_four_x(std::size_t cols) {
  if (cols < 2)
    throw PreconditionError("snake automaton: need at least two columns");
  // States: column counters A0..A(cols-1) before the block, B after the
  // first X, gap counters C0..C(cols-2), D after the third X, E after the
  // block is complete.
  std::vector<std::string> states;
  for (std::size_t j = 0; j < cols; ++j) states.push_back("A" + std::to_string(j));
  states.push_back("B");
  for (std::size_t k = 0; k + 1 < cols; ++k)
    states.push_back("C" + std::to_string(k));
  states.push_back("D");
  states.push_back("E");
  const std::size_t q = states.size();
  const std::size_t A0 = 0, B = cols, C0 = cols + 1, D = 2 * cols,
                    E = 2 * cols + 1;

  Matrix wi = Matrix::Zero(static_cast<Eigen::Index>(q),
                           static_cast<Eigen::Index>(q));
  Matrix wx = Matrix::Zero(static_cast<Eigen::Index>(q),
                           static_cast<Eigen::Index>(q));
  for (std::size_t j = 0; j < cols; ++j)
    wi(static_cast<Eigen::Index>(A0 + j),
       static_cast<Eigen::Index>(A0 + (j + 1) % cols)) = 1;
  for (std::size_t k = 0; k + 2 < cols; ++k)
    wi(static_cast<Eigen::Index>(C0 + k), static_cast<Eigen::Index>(C0 + k + 1)) = 1;
  wi(static_cast<Eigen::Index>(E), static_cast<Eigen::Index>(E)) = 1;
  // The first X may not start in the last column, or the pair would wrap.
  for (std::size_t j = 0; j + 1 < cols; ++j)
    wx(static_cast<Eigen::Index>(A0 + j), static_cast<Eigen::Index>(B)) = 1;
  wx(static_cast<Eigen::Index>(B), static_cast<Eigen::Index>(C0)) = 1;
  wx(static_cast<Eigen::Index>(C0 + cols - 2), static_cast<Eigen::Index>(D)) = 1;
  wx(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(E)) = 1;

  WeightedAutomaton a{.states = states,
                      .alphabet = {"I", "X"},
                      .weights = {{"I", wi}, {"X", wx}},
                      .initial = RowVector::Zero(static_cast<Eigen::Index>(q)),
                      .final = Vector::Zero(static_cast<Eigen::Index>(q)),
                      .symbols = grid_operator_symbols()};
  a.initial(static_cast<Eigen::Index>(A0)) = 1;
  // Accept either a completed block or the undisturbed background.
  a.final(static_cast<Eigen::Index>(E)) = 1;
  a.final(static_cast<Eigen::Index>(A0)) = 1;
  a.validate();
  return a;
}

}  // namespace automps
