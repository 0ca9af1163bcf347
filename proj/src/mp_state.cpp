#include "automps/mp_state.hpp"

#include <algorithm>

#include "automps/errors.hpp"

namespace automps {

std::string bond_label(std::size_t k) { return "b" + std::to_string(k); }
std::string phys_label(std::size_t k) { return "p" + std::to_string(k); }
std::string row_label(std::size_t k) { return "r" + std::to_string(k); }
std::string col_label(std::size_t k) { return "c" + std::to_string(k); }

namespace {

Tensor normalized_site(Tensor t, std::span<const std::string> order) {
  return t.transposed(order);
}

}  // namespace

MatrixProductState::MatrixProductState(std::vector<Tensor> sites,
                                       std::size_t phys_dim, Boundary boundary)
    : sites_(std::move(sites)), phys_dim_(phys_dim), boundary_(boundary) {
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    std::vector<std::string> order{bond_label(k), phys_label(k),
                                   bond_label(k + 1)};
    sites_[k] = normalized_site(std::move(sites_[k]), order);
  }
  validate();
}

void MatrixProductState::validate() const {
  if (sites_.empty()) throw ShapeError("mps: no sites");
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    if (sites_[k].dim(phys_label(k)) != phys_dim_)
      throw ShapeError("mps: wrong physical extent at site " +
                       std::to_string(k));
    if (k + 1 < sites_.size() &&
        sites_[k].dim(bond_label(k + 1)) != sites_[k + 1].dim(bond_label(k + 1)))
      throw ShapeError("mps: bond extent mismatch at bond " +
                       std::to_string(k + 1));
  }
  std::size_t first = sites_.front().dim(bond_label(0));
  std::size_t last = sites_.back().dim(bond_label(sites_.size()));
  if (boundary_ == Boundary::open) {
    if (first != 1 || last != 1)
      throw ShapeError("mps: open boundary requires end bonds of extent 1");
  } else if (first != last) {
    throw ShapeError("mps: periodic wrap bond extents differ");
  }
}

namespace {

// Open-chain bond profile capped at what the surrounding physical space can
// carry: min(bond, d^k, d^(n-k)).
std::size_t capped_extent(std::size_t k, std::size_t n, std::size_t d,
                          std::size_t bond) {
  std::size_t e = std::min(k, n - k);
  std::size_t cap = 1;
  for (std::size_t i = 0; i < e && cap < bond; ++i) cap *= d;
  return std::min(cap, bond);
}

}  // namespace

MatrixProductState MatrixProductState::random(std::size_t n_sites,
                                              std::size_t phys_dim,
                                              std::size_t bond,
                                              std::uint64_t seed,
                                              Boundary boundary) {
  if (n_sites == 0) throw ShapeError("mps: no sites");
  if (bond == 0) throw ShapeError("mps: bond must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Tensor> sites;
  sites.reserve(n_sites);
  for (std::size_t k = 0; k < n_sites; ++k) {
    std::size_t left = bond, right = bond;
    if (boundary == Boundary::open) {
      left = capped_extent(k, n_sites, phys_dim, bond);
      right = capped_extent(k + 1, n_sites, phys_dim, bond);
    }
    sites.push_back(random_tensor(
        {bond_label(k), phys_label(k), bond_label(k + 1)},
        {left, phys_dim, right}, rng));
  }
  return MatrixProductState(std::move(sites), phys_dim, boundary);
}

const Tensor& MatrixProductState::site(std::size_t k) const {
  if (k >= sites_.size()) throw RangeError("mps: site out of range");
  return sites_[k];
}

void MatrixProductState::set_site(std::size_t k, Tensor t) {
  if (k >= sites_.size()) throw RangeError("mps: site out of range");
  std::vector<std::string> order{bond_label(k), phys_label(k),
                                 bond_label(k + 1)};
  sites_[k] = normalized_site(std::move(t), order);
  validate();
}

std::size_t MatrixProductState::bond_extent(std::size_t k) const {
  if (k > sites_.size()) throw RangeError("mps: bond out of range");
  if (k < sites_.size()) return sites_[k].dim(bond_label(k));
  return sites_.back().dim(bond_label(k));
}

MatrixProductOperator::MatrixProductOperator(std::vector<Tensor> sites,
                                             std::size_t phys_dim,
                                             Boundary boundary)
    : sites_(std::move(sites)), phys_dim_(phys_dim), boundary_(boundary) {
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    std::vector<std::string> order{bond_label(k), row_label(k), col_label(k),
                                   bond_label(k + 1)};
    sites_[k] = normalized_site(std::move(sites_[k]), order);
  }
  validate();
}

void MatrixProductOperator::validate() const {
  if (sites_.empty()) throw ShapeError("mpo: no sites");
  for (std::size_t k = 0; k < sites_.size(); ++k) {
    if (sites_[k].dim(row_label(k)) != phys_dim_ ||
        sites_[k].dim(col_label(k)) != phys_dim_)
      throw ShapeError("mpo: wrong physical extent at site " +
                       std::to_string(k));
    if (k + 1 < sites_.size() &&
        sites_[k].dim(bond_label(k + 1)) != sites_[k + 1].dim(bond_label(k + 1)))
      throw ShapeError("mpo: bond extent mismatch at bond " +
                       std::to_string(k + 1));
  }
  std::size_t first = sites_.front().dim(bond_label(0));
  std::size_t last = sites_.back().dim(bond_label(sites_.size()));
  if (boundary_ == Boundary::open) {
    if (first != 1 || last != 1)
      throw ShapeError("mpo: open boundary requires end bonds of extent 1");
  } else if (first != last) {
    throw ShapeError("mpo: periodic wrap bond extents differ");
  }
}

MatrixProductOperator MatrixProductOperator::identity(std::size_t n_sites,
                                                      std::size_t phys_dim,
                                                      Boundary boundary) {
  std::vector<Tensor> sites;
  sites.reserve(n_sites);
  for (std::size_t k = 0; k < n_sites; ++k) {
    Tensor t({bond_label(k), row_label(k), col_label(k), bond_label(k + 1)},
             {1, phys_dim, phys_dim, 1});
    for (std::size_t p = 0; p < phys_dim; ++p)
      t.at(std::vector<std::size_t>{0, p, p, 0}) = Complex(1.0);
    sites.push_back(std::move(t));
  }
  return MatrixProductOperator(std::move(sites), phys_dim, boundary);
}

const Tensor& MatrixProductOperator::site(std::size_t k) const {
  if (k >= sites_.size()) throw RangeError("mpo: site out of range");
  return sites_[k];
}

void MatrixProductOperator::set_site(std::size_t k, Tensor t) {
  if (k >= sites_.size()) throw RangeError("mpo: site out of range");
  std::vector<std::string> order{bond_label(k), row_label(k), col_label(k),
                                 bond_label(k + 1)};
  sites_[k] = normalized_site(std::move(t), order);
  validate();
}

std::size_t MatrixProductOperator::bond_extent(std::size_t k) const {
  if (k > sites_.size()) throw RangeError("mpo: bond out of range");
  if (k < sites_.size()) return sites_[k].dim(bond_label(k));
  return sites_.back().dim(bond_label(k));
}

Complex amplitude(const MatrixProductState& s,
                  std::span<const std::size_t> config) {
  if (config.size() != s.length())
    throw ShapeError("amplitude: configuration length != number of sites");
  const std::size_t n = s.length();
  std::vector<std::string> l{bond_label(0)}, r{bond_label(1)};
  Matrix m = s.site(0).sliced(phys_label(0), config[0]).to_matrix(l, r);
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<std::string> lk{bond_label(k)}, rk{bond_label(k + 1)};
    m = m * s.site(k).sliced(phys_label(k), config[k]).to_matrix(lk, rk);
  }
  if (s.boundary() == Boundary::periodic) return m.trace();
  return m(0, 0);
}

Complex amplitude(const MatrixProductState& s,
                  std::initializer_list<std::size_t> config) {
  std::vector<std::size_t> c(config);
  return amplitude(s, std::span<const std::size_t>(c));
}

Tensor transfer_tensor(const MatrixProductState& bra,
                       const MatrixProductOperator& op,
                       const MatrixProductState& ket, std::size_t k) {
  Tensor b = bra.site(k).conjugate().renamed(std::vector<LabelPair>{
      {bond_label(k), "B" + std::to_string(k)},
      {phys_label(k), row_label(k)},
      {bond_label(k + 1), "B" + std::to_string(k + 1)}});
  Tensor o = op.site(k).renamed(std::vector<LabelPair>{
      {bond_label(k), "O" + std::to_string(k)},
      {bond_label(k + 1), "O" + std::to_string(k + 1)}});
  Tensor kt = ket.site(k).renamed(std::vector<LabelPair>{
      {bond_label(k), "K" + std::to_string(k)},
      {phys_label(k), col_label(k)},
      {bond_label(k + 1), "K" + std::to_string(k + 1)}});
  Tensor bo = contract(b, o, {{row_label(k), row_label(k)}});
  return contract(bo, kt, {{col_label(k), col_label(k)}});
}

Tensor group_transfer(const Tensor& e, std::size_t k) {
  auto triple = [](std::size_t i) {
    return std::vector<std::string>{"B" + std::to_string(i),
                                    "O" + std::to_string(i),
                                    "K" + std::to_string(i)};
  };
  Tensor g = e.merged(std::span<const std::string>(triple(k)),
                      "E" + std::to_string(k));
  return g.merged(std::span<const std::string>(triple(k + 1)),
                  "E" + std::to_string(k + 1));
}

namespace {

void check_sandwich(const MatrixProductState& bra,
                    const MatrixProductOperator& op,
                    const MatrixProductState& ket) {
  if (bra.length() != ket.length() || bra.length() != op.length())
    throw ShapeError("expectation: lengths differ");
  if (bra.phys_dim() != ket.phys_dim() || bra.phys_dim() != op.phys_dim())
    throw ShapeError("expectation: physical dimensions differ");
  if (bra.boundary() != ket.boundary() || bra.boundary() != op.boundary())
    throw ShapeError("expectation: boundaries differ");
}

Tensor boundary_triple(std::size_t k) {
  Tensor t({"B" + std::to_string(k), "O" + std::to_string(k),
            "K" + std::to_string(k)},
           {1, 1, 1});
  t.data()[0] = Complex(1.0);
  return t;
}

std::vector<LabelPair> triple_pairs(std::size_t k) {
  return {{"B" + std::to_string(k), "B" + std::to_string(k)},
          {"O" + std::to_string(k), "O" + std::to_string(k)},
          {"K" + std::to_string(k), "K" + std::to_string(k)}};
}

}  // namespace

Complex expectation(const MatrixProductState& bra,
                    const MatrixProductOperator& op,
                    const MatrixProductState& ket) {
  check_sandwich(bra, op, ket);
  const std::size_t n = bra.length();
  if (bra.boundary() == Boundary::open) {
    Tensor left = boundary_triple(0);
    for (std::size_t k = 0; k < n; ++k) {
      Tensor e = transfer_tensor(bra, op, ket, k);
      auto pairs = triple_pairs(k);
      left = contract(left, e, std::span<const LabelPair>(pairs));
    }
    auto pairs = triple_pairs(n);
    return contract(left, boundary_triple(n),
                    std::span<const LabelPair>(pairs))
        .scalar_value();
  }
  // Periodic: fold the chain and close the wrap bonds with a trace.
  Tensor w = transfer_tensor(bra, op, ket, 0);
  for (std::size_t k = 1; k < n; ++k) {
    auto pairs = triple_pairs(k);
    w = contract(w, transfer_tensor(bra, op, ket, k),
                 std::span<const LabelPair>(pairs));
  }
  auto ends = std::vector<LabelPair>{
      {"B0", "B" + std::to_string(n)},
      {"O0", "O" + std::to_string(n)},
      {"K0", "K" + std::to_string(n)}};
  return trace_pairs(w, std::span<const LabelPair>(ends)).scalar_value();
}

Complex inner(const MatrixProductState& bra, const MatrixProductState& ket) {
  if (bra.length() != ket.length())
    throw ShapeError("inner: lengths differ");
  if (bra.phys_dim() != ket.phys_dim())
    throw ShapeError("inner: physical dimensions differ");
  if (bra.boundary() != ket.boundary())
    throw ShapeError("inner: boundaries differ");
  MatrixProductOperator id =
      MatrixProductOperator::identity(bra.length(), bra.phys_dim(),
                                      bra.boundary());
  return expectation(bra, id, ket);
}

MatrixProductState apply_gauge(const MatrixProductState& s, std::size_t bond,
                               const Matrix& x, const Matrix& x_inv) {
  if (bond == 0 || bond >= s.length())
    throw RangeError("gauge: bond must be interior");
  const auto old_ext = static_cast<Eigen::Index>(s.bond_extent(bond));
  if (x.rows() != old_ext || x_inv.cols() != old_ext ||
      x.cols() != x_inv.rows())
    throw GaugeError("gauge: matrix shapes do not fit the bond");
  Matrix prod = x * x_inv;
  if (!prod.isApprox(Matrix::Identity(old_ext, old_ext), 1e-10))
    throw GaugeError("gauge: x . x_inv is not the identity on the bond");

  const std::string b = bond_label(bond);
  Tensor xt = Tensor::from_matrix(x, {b}, {static_cast<std::size_t>(x.rows())},
                                  {"_gauge"},
                                  {static_cast<std::size_t>(x.cols())});
  Tensor xit = Tensor::from_matrix(
      x_inv, {"_gauge"}, {static_cast<std::size_t>(x_inv.rows())}, {b},
      {static_cast<std::size_t>(x_inv.cols())});

  std::vector<Tensor> sites;
  sites.reserve(s.length());
  for (std::size_t k = 0; k < s.length(); ++k) {
    if (k == bond - 1) {
      Tensor t = contract(s.site(k), xt, {{b, b}});
      sites.push_back(t.renamed("_gauge", b));
    } else if (k == bond) {
      Tensor t = contract(xit, s.site(k), {{b, b}});
      sites.push_back(t.renamed("_gauge", b));
    } else {
      sites.push_back(s.site(k));
    }
  }
  return MatrixProductState(std::move(sites), s.phys_dim(), s.boundary());
}

MatrixProductState compress_bond(const MatrixProductState& s, std::size_t bond,
                                 double rel_tol) {
  if (bond == 0 || bond >= s.length())
    throw RangeError("compress: bond must be interior");
  if (rel_tol < 0) throw PreconditionError("compress: rel_tol must be >= 0");
  const std::size_t kl = bond - 1, kr = bond;
  const std::string b = bond_label(bond);
  Tensor theta = contract(s.site(kl), s.site(kr), {{b, b}});
  std::vector<std::string> left{bond_label(kl), phys_label(kl)};
  SvdSplit split = svd_split(theta, std::span<const std::string>(left), b);

  double top = split.s.empty() ? 0.0 : split.s.front();
  std::size_t keep = 0;
  for (double v : split.s)
    if (v > rel_tol * top) ++keep;
  keep = std::max<std::size_t>(keep, 1);

  Tensor u = split.u.sliced(b, 0, keep);
  Tensor v = split.v.sliced(b, 0, keep);
  // Fold the kept singular values into the right factor.
  Tensor sv({b, "_sv"}, {keep, keep});
  for (std::size_t i = 0; i < keep; ++i)
    sv.at(std::vector<std::size_t>{i, i}) = Complex(split.s[i]);
  Tensor right = contract(sv, v, {{"_sv", b}});

  std::vector<Tensor> sites;
  for (std::size_t k = 0; k < s.length(); ++k) {
    if (k == kl)
      sites.push_back(u);
    else if (k == kr)
      sites.push_back(right);
    else
      sites.push_back(s.site(k));
  }
  return MatrixProductState(std::move(sites), s.phys_dim(), s.boundary());
}

}  // namespace automps
