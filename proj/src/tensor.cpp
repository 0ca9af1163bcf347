#include "automps/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace automps {

namespace {

std::size_t product(std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

// Row-major strides for the given extents.
std::vector<std::size_t> strides_of(std::span<const std::size_t> dims) {
  std::vector<std::size_t> s(dims.size(), 1);
  for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
  return s;
}

thread_local ContractionCounters g_counters;

}  // namespace

ContractionCounters& tensor_counters() { return g_counters; }

void reset_tensor_counters() { g_counters = ContractionCounters{}; }

Tensor::Tensor() : data_(1, Complex(0.0)) {}

Tensor::Tensor(std::vector<std::string> labels, std::vector<std::size_t> dims)
    : labels_(std::move(labels)), dims_(std::move(dims)) {
  data_.assign(product(dims_), Complex(0.0));
  check_invariants();
}

Tensor::Tensor(std::vector<std::string> labels, std::vector<std::size_t> dims,
               std::vector<Complex> data)
    : labels_(std::move(labels)), dims_(std::move(dims)), data_(std::move(data)) {
  check_invariants();
}

Tensor Tensor::scalar(Complex value) {
  Tensor t;
  t.data_[0] = value;
  return t;
}

void Tensor::check_invariants() const {
  if (labels_.size() != dims_.size())
    throw DimensionError("tensor: label/extent count mismatch");
  for (auto d : dims_)
    if (d == 0) throw DimensionError("tensor: zero extent");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second)
      throw LabelError("tensor: duplicate label '" + l + "'");
  if (data_.size() != product(dims_))
    throw DimensionError("tensor: data size does not match extents");
}

bool Tensor::has_label(const std::string& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t Tensor::axis(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw LabelError("unknown label '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t Tensor::dim(const std::string& label) const {
  return dims_[axis(label)];
}

Complex Tensor::at(std::span<const std::size_t> indices) const {
  return const_cast<Tensor*>(this)->at(indices);
}

Complex& Tensor::at(std::span<const std::size_t> indices) {
  if (indices.size() != rank())
    throw DimensionError("tensor: wrong number of indices");
  std::size_t offset = 0;
  auto strides = strides_of(dims_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= dims_[i]) throw RangeError("tensor: index out of range");
    offset += indices[i] * strides[i];
  }
  return data_[offset];
}

Complex Tensor::at(std::initializer_list<std::size_t> indices) const {
  std::vector<std::size_t> idx(indices);
  return at(std::span<const std::size_t>(idx));
}

Complex Tensor::scalar_value() const {
  if (rank() != 0) throw DimensionError("tensor: not a scalar");
  return data_[0];
}

Tensor Tensor::conjugate() const {
  Tensor t(*this);
  for (auto& v : t.data_) v = std::conj(v);
  return t;
}

Tensor Tensor::scaled(Complex factor) const {
  Tensor t(*this);
  for (auto& v : t.data_) v *= factor;
  return t;
}

Tensor Tensor::renamed(const std::string& from, const std::string& to) const {
  LabelPair p{from, to};
  return renamed(std::span<const LabelPair>(&p, 1));
}

Tensor Tensor::renamed(std::span<const LabelPair> renames) const {
  Tensor t(*this);
  for (const auto& [from, to] : renames) t.labels_[axis(from)] = to;
  t.check_invariants();
  return t;
}

Tensor Tensor::transposed(std::span<const std::string> order) const {
  if (order.size() != rank())
    throw LabelError("transpose: order must list every label");
  std::vector<std::size_t> perm(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) perm[i] = axis(order[i]);

  std::vector<std::size_t> new_dims(rank());
  for (std::size_t i = 0; i < rank(); ++i) new_dims[i] = dims_[perm[i]];

  Tensor out(std::vector<std::string>(order.begin(), order.end()), new_dims);
  auto old_strides = strides_of(dims_);
  auto new_strides = strides_of(new_dims);

  std::vector<std::size_t> idx(rank(), 0);
  for (std::size_t flat = 0; flat < size(); ++flat) {
    std::size_t src = 0;
    for (std::size_t i = 0; i < rank(); ++i) src += idx[i] * old_strides[perm[i]];
    out.data_[flat] = data_[src];
    for (std::size_t i = rank(); i-- > 0;) {
      if (++idx[i] < new_dims[i]) break;
      idx[i] = 0;
    }
  }
  return out;
}

Tensor Tensor::transposed(std::initializer_list<std::string> order) const {
  std::vector<std::string> o(order);
  return transposed(std::span<const std::string>(o));
}

Tensor Tensor::sliced(const std::string& label, std::size_t index) const {
  Tensor t = sliced(label, index, 1);
  std::size_t ax = t.axis(label);
  t.labels_.erase(t.labels_.begin() + static_cast<std::ptrdiff_t>(ax));
  t.dims_.erase(t.dims_.begin() + static_cast<std::ptrdiff_t>(ax));
  return t;
}

Tensor Tensor::sliced(const std::string& label, std::size_t begin,
                      std::size_t count) const {
  std::size_t ax = axis(label);
  if (begin + count > dims_[ax] || count == 0)
    throw RangeError("slice: range out of bounds for '" + label + "'");
  std::vector<std::size_t> new_dims = dims_;
  new_dims[ax] = count;
  Tensor out(labels_, new_dims);

  auto strides = strides_of(dims_);
  std::size_t outer = 1;
  for (std::size_t i = 0; i < ax; ++i) outer *= dims_[i];
  std::size_t inner = strides[ax];
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t k = 0; k < count; ++k)
      std::copy_n(data_.begin() +
                      static_cast<std::ptrdiff_t>((o * dims_[ax] + begin + k) * inner),
                  inner,
                  out.data_.begin() +
                      static_cast<std::ptrdiff_t>((o * count + k) * inner));
  return out;
}

Tensor Tensor::merged(std::span<const std::string> group,
                      const std::string& fused) const {
  if (group.empty()) throw LabelError("merge: empty group");
  // Move the group together at the position of its first member, then fuse.
  std::vector<std::string> order;
  order.reserve(rank());
  std::unordered_set<std::string> in_group(group.begin(), group.end());
  if (in_group.size() != group.size())
    throw LabelError("merge: duplicate label in group");
  for (const auto& l : labels_) {
    if (l == group.front())
      order.insert(order.end(), group.begin(), group.end());
    else if (!in_group.count(l))
      order.push_back(l);
  }
  Tensor t = transposed(std::span<const std::string>(order));

  std::size_t start = 0;
  while (order[start] != group.front()) ++start;
  std::size_t fused_dim = 1;
  for (std::size_t i = 0; i < group.size(); ++i) fused_dim *= t.dims_[start + i];

  std::vector<std::string> new_labels(order.begin(),
                                      order.begin() + static_cast<std::ptrdiff_t>(start));
  std::vector<std::size_t> new_dims(t.dims_.begin(),
                                    t.dims_.begin() + static_cast<std::ptrdiff_t>(start));
  new_labels.push_back(fused);
  new_dims.push_back(fused_dim);
  for (std::size_t i = start + group.size(); i < t.rank(); ++i) {
    new_labels.push_back(t.labels_[i]);
    new_dims.push_back(t.dims_[i]);
  }
  return Tensor(std::move(new_labels), std::move(new_dims), std::move(t.data_));
}

double Tensor::norm() const {
  double acc = 0.0;
  for (const auto& v : data_) acc += std::norm(v);
  return std::sqrt(acc);
}

Matrix Tensor::to_matrix(std::span<const std::string> row_labels,
                         std::span<const std::string> col_labels) const {
  if (row_labels.size() + col_labels.size() != rank())
    throw LabelError("to_matrix: labels must exhaust the tensor");
  std::vector<std::string> order(row_labels.begin(), row_labels.end());
  order.insert(order.end(), col_labels.begin(), col_labels.end());
  Tensor t = transposed(std::span<const std::string>(order));
  std::size_t nrow = 1, ncol = 1;
  for (std::size_t i = 0; i < row_labels.size(); ++i) nrow *= t.dims_[i];
  for (std::size_t i = row_labels.size(); i < t.rank(); ++i) ncol *= t.dims_[i];
  Matrix m(nrow, ncol);
  for (std::size_t r = 0; r < nrow; ++r)
    for (std::size_t c = 0; c < ncol; ++c) m(static_cast<Eigen::Index>(r),
                                             static_cast<Eigen::Index>(c)) =
        t.data_[r * ncol + c];
  return m;
}

Tensor Tensor::from_matrix(const Matrix& m, std::vector<std::string> row_labels,
                           std::vector<std::size_t> row_dims,
                           std::vector<std::string> col_labels,
                           std::vector<std::size_t> col_dims) {
  if (product(row_dims) != static_cast<std::size_t>(m.rows()) ||
      product(col_dims) != static_cast<std::size_t>(m.cols()))
    throw DimensionError("from_matrix: extents do not match matrix shape");
  std::vector<std::string> labels = std::move(row_labels);
  labels.insert(labels.end(), col_labels.begin(), col_labels.end());
  std::vector<std::size_t> dims = std::move(row_dims);
  dims.insert(dims.end(), col_dims.begin(), col_dims.end());
  std::vector<Complex> data(static_cast<std::size_t>(m.rows()) *
                            static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      data[static_cast<std::size_t>(r) * static_cast<std::size_t>(m.cols()) +
           static_cast<std::size_t>(c)] = m(r, c);
  return Tensor(std::move(labels), std::move(dims), std::move(data));
}

Tensor contract(const Tensor& a, const Tensor& b,
                std::span<const LabelPair> pairs) {
  std::unordered_set<std::string> a_paired, b_paired;
  for (const auto& [la, lb] : pairs) {
    if (!a_paired.insert(la).second)
      throw LabelError("contract: label '" + la + "' paired twice");
    if (!b_paired.insert(lb).second)
      throw LabelError("contract: label '" + lb + "' paired twice");
    if (a.dim(la) != b.dim(lb))
      throw DimensionError("contract: extent mismatch on (" + la + ", " + lb +
                           ")");
  }

  std::vector<std::string> a_free, b_free;
  for (const auto& l : a.labels())
    if (!a_paired.count(l)) a_free.push_back(l);
  for (const auto& l : b.labels())
    if (!b_paired.count(l)) b_free.push_back(l);

  std::vector<std::string> a_order = a_free, b_order;
  for (const auto& [la, lb] : pairs) a_order.push_back(la);
  for (const auto& [la, lb] : pairs) b_order.push_back(lb);
  b_order.insert(b_order.end(), b_free.begin(), b_free.end());

  Tensor ta = a.transposed(std::span<const std::string>(a_order));
  Tensor tb = b.transposed(std::span<const std::string>(b_order));

  std::size_t m = 1, k = 1, n = 1;
  for (const auto& l : a_free) m *= a.dim(l);
  for (const auto& [la, lb] : pairs) k *= a.dim(la);
  for (const auto& l : b_free) n *= b.dim(l);

  std::vector<std::string> out_labels = a_free;
  out_labels.insert(out_labels.end(), b_free.begin(), b_free.end());
  std::vector<std::size_t> out_dims;
  out_dims.reserve(out_labels.size());
  for (const auto& l : a_free) out_dims.push_back(a.dim(l));
  for (const auto& l : b_free) out_dims.push_back(b.dim(l));

  Tensor out(std::move(out_labels), std::move(out_dims));
  const auto& A = ta.data();
  const auto& B = tb.data();
  auto& C = out.data();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t kk = 0; kk < k; ++kk) {
      const Complex aik = A[i * k + kk];
      if (aik == Complex(0.0)) continue;
      const std::size_t brow = kk * n;
      const std::size_t crow = i * n;
      for (std::size_t j = 0; j < n; ++j) C[crow + j] += aik * B[brow + j];
    }

  g_counters.contractions += 1;
  g_counters.multiply_adds += static_cast<std::uint64_t>(m) * k * n;
  return out;
}

Tensor contract(const Tensor& a, const Tensor& b,
                std::initializer_list<LabelPair> pairs) {
  std::vector<LabelPair> p(pairs);
  return contract(a, b, std::span<const LabelPair>(p));
}

Tensor trace_pairs(const Tensor& t, std::span<const LabelPair> pairs) {
  if (pairs.empty()) return t;
  auto [l1, l2] = pairs.front();
  if (t.dim(l1) != t.dim(l2))
    throw DimensionError("trace: extent mismatch on (" + l1 + ", " + l2 + ")");
  std::size_t d = t.dim(l1);
  Tensor acc;
  for (std::size_t i = 0; i < d; ++i) {
    Tensor term = t.sliced(l1, i).sliced(l2, i);
    acc = (i == 0) ? term : acc + term;
  }
  return trace_pairs(acc, pairs.subspan(1));
}

Tensor trace_pairs(const Tensor& t, std::initializer_list<LabelPair> pairs) {
  std::vector<LabelPair> p(pairs);
  return trace_pairs(t, std::span<const LabelPair>(p));
}

Tensor operator+(const Tensor& a, const Tensor& b) {
  Tensor tb = b.transposed(std::span<const std::string>(a.labels()));
  if (a.dims() != tb.dims()) throw DimensionError("add: extent mismatch");
  Tensor out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] += tb.data()[i];
  return out;
}

Tensor operator-(const Tensor& a, const Tensor& b) {
  return a + b.scaled(Complex(-1.0));
}

SvdSplit svd_split(const Tensor& t, std::span<const std::string> left_labels,
                   const std::string& bond_label) {
  if (left_labels.empty() || left_labels.size() >= t.rank())
    throw SplitError("svd_split: left labels must be a nonempty proper subset");
  for (const auto& l : left_labels) (void)t.axis(l);
  std::vector<std::string> right_labels;
  for (const auto& l : t.labels())
    if (std::find(left_labels.begin(), left_labels.end(), l) ==
        left_labels.end())
      right_labels.push_back(l);
  if (right_labels.size() + left_labels.size() != t.rank())
    throw SplitError("svd_split: left labels must be distinct");
  if (t.has_label(bond_label))
    throw LabelError("svd_split: bond label '" + bond_label + "' collides");

  Matrix m = t.to_matrix(left_labels, std::span<const std::string>(right_labels));
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Matrix& U = svd.matrixU();
  const Matrix& V = svd.matrixV();
  Eigen::VectorXd sv = svd.singularValues();

  std::vector<std::size_t> left_dims, right_dims;
  for (const auto& l : left_labels) left_dims.push_back(t.dim(l));
  for (const auto& l : right_labels) right_dims.push_back(t.dim(l));
  std::size_t r = static_cast<std::size_t>(sv.size());

  SvdSplit out;
  out.u = Tensor::from_matrix(
      U, std::vector<std::string>(left_labels.begin(), left_labels.end()),
      left_dims, {bond_label}, {r});
  out.v = Tensor::from_matrix(V.adjoint(), {bond_label}, {r}, right_labels,
                              right_dims);
  out.s.assign(sv.data(), sv.data() + sv.size());
  return out;
}

SvdSplit svd_split(const Tensor& t,
                   std::initializer_list<std::string> left_labels,
                   const std::string& bond_label) {
  std::vector<std::string> l(left_labels);
  return svd_split(t, std::span<const std::string>(l), bond_label);
}

EigenPair gen_eig_smallest(const Tensor& h, const Tensor& n, double tol) {
  if (h.rank() % 2 != 0 || n.rank() % 2 != 0)
    throw ShapeError("gen_eig: rank must be even to flatten as a matrix");
  std::size_t half = h.rank() / 2;
  std::vector<std::string> rows(h.labels().begin(),
                                h.labels().begin() + static_cast<std::ptrdiff_t>(half));
  std::vector<std::string> cols(h.labels().begin() + static_cast<std::ptrdiff_t>(half),
                                h.labels().end());
  Matrix H = h.to_matrix(rows, cols);
  if (H.rows() != H.cols())
    throw ShapeError("gen_eig: flattening is not square");
  std::vector<std::string> nrows(n.labels().begin(),
                                 n.labels().begin() + static_cast<std::ptrdiff_t>(n.rank() / 2));
  std::vector<std::string> ncols(n.labels().begin() + static_cast<std::ptrdiff_t>(n.rank() / 2),
                                 n.labels().end());
  Matrix N = n.to_matrix(nrows, ncols);
  if (N.rows() != H.rows() || N.cols() != H.cols())
    throw ShapeError("gen_eig: h and n flatten to different shapes");

  double hnorm = H.norm();
  double nnorm = N.norm();
  if (hnorm > 0 && (H - H.adjoint()).norm() > 1e-8 * hnorm)
    throw HermiticityError("gen_eig: h is not Hermitian");
  if (nnorm > 0 && (N - N.adjoint()).norm() > 1e-8 * nnorm)
    throw HermiticityError("gen_eig: n is not Hermitian");
  H = (H + H.adjoint().eval()) / 2.0;
  N = (N + N.adjoint().eval()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Matrix> ns(N);
  const Eigen::VectorXd& nd = ns.eigenvalues();
  double nmax = nd.size() ? nd(nd.size() - 1) : 0.0;
  if (nmax <= 0.0) throw DegenerateMetricError("gen_eig: metric is zero");

  // Restrict to the numerically nonzero range of the metric and whiten.
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = 0; i < nd.size(); ++i)
    if (nd(i) > 1e-10 * nmax) kept.push_back(i);
  Matrix B(N.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j)
    B.col(static_cast<Eigen::Index>(j)) =
        ns.eigenvectors().col(kept[j]) / std::sqrt(nd(kept[j]));

  Matrix Hp = B.adjoint() * H * B;
  Hp = (Hp + Hp.adjoint().eval()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> hs(Hp);
  double lambda = hs.eigenvalues()(0);
  Vector v = B * hs.eigenvectors().col(0);

  double residual = (H * v - lambda * (N * v)).norm();
  if (residual > std::max(tol, 1e-30) * std::max(hnorm, 1.0) * 10.0) {
    // Tolerance is advisory for the dense solve; keep the best answer.
  }

  std::vector<std::size_t> col_dims;
  for (const auto& l : cols) col_dims.push_back(h.dim(l));
  EigenPair out;
  out.value = lambda;
  out.vector = Tensor::from_matrix(v, cols, col_dims, {}, {});
  return out;
}

Tensor random_tensor(std::vector<std::string> labels,
                     std::vector<std::size_t> dims, std::mt19937_64& rng) {
  Tensor t(std::move(labels), std::move(dims));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& v : t.data()) v = Complex(u(rng), u(rng));
  return t;
}

}  // namespace automps
