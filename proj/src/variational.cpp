#include "automps/variational.hpp"

#include <cmath>

#include "automps/errors.hpp"
#include "automps/oracle.hpp"

namespace automps {

namespace {

std::string b_label(std::size_t k) { return "B" + std::to_string(k); }
std::string o_label(std::size_t k) { return "O" + std::to_string(k); }
std::string k_label(std::size_t k) { return "K" + std::to_string(k); }

std::vector<LabelPair> triple_pairs(std::size_t k) {
  return {{b_label(k), b_label(k)},
          {o_label(k), o_label(k)},
          {k_label(k), k_label(k)}};
}

}  // namespace

EnvironmentCache::EnvironmentCache(const MatrixProductOperator& op,
                                   const MatrixProductState& state)
    : owned_op_(nullptr), op_(&op), state_(&state) {
  if (state.boundary() != Boundary::open || op.boundary() != Boundary::open)
    throw PreconditionError("environment cache: open chains only");
  if (op.length() != state.length() || op.phys_dim() != state.phys_dim())
    throw ShapeError("environment cache: operator and state disagree");
  left_.resize(state.length());
  right_.resize(state.length());
}

EnvironmentCache EnvironmentCache::metric(const MatrixProductState& state) {
  auto id = std::make_unique<MatrixProductOperator>(
      MatrixProductOperator::identity(state.length(), state.phys_dim()));
  EnvironmentCache cache(*id, state);
  cache.owned_op_ = std::move(id);
  cache.op_ = cache.owned_op_.get();
  return cache;
}

Tensor EnvironmentCache::transfer(std::size_t k) const {
  return transfer_tensor(*state_, *op_, *state_, k);
}

Tensor EnvironmentCache::boundary(std::size_t k) const {
  Tensor t({b_label(k), o_label(k), k_label(k)}, {1, 1, 1});
  t.data()[0] = Complex(1.0);
  return t;
}

void EnvironmentCache::absorb_left(std::size_t k) {
  auto before = tensor_counters().multiply_adds;
  const Tensor& prev = *left_[k - 1];
  auto pairs = triple_pairs(k - 1);
  left_[k] = contract(prev, transfer(k - 1), std::span<const LabelPair>(pairs));
  absorptions_ += 1;
  multiply_adds_ += tensor_counters().multiply_adds - before;
}

void EnvironmentCache::absorb_right(std::size_t k) {
  auto before = tensor_counters().multiply_adds;
  const Tensor& prev = *right_[k + 1];
  auto pairs = triple_pairs(k + 2);
  right_[k] =
      contract(transfer(k + 1), prev, std::span<const LabelPair>(pairs));
  absorptions_ += 1;
  multiply_adds_ += tensor_counters().multiply_adds - before;
}

const Tensor& EnvironmentCache::left(std::size_t site) {
  if (site >= length()) throw RangeError("environment: site out of range");
  if (!left_[0]) left_[0] = boundary(0);
  std::size_t k = site;
  while (k > 0 && !left_[k]) --k;
  for (; k < site; ++k) absorb_left(k + 1);
  return *left_[site];
}

const Tensor& EnvironmentCache::right(std::size_t site) {
  const std::size_t n = length();
  if (site >= n) throw RangeError("environment: site out of range");
  if (!right_[n - 1]) right_[n - 1] = boundary(n);
  std::size_t k = site;
  while (k + 1 < n && !right_[k]) ++k;
  for (; k > site; --k) absorb_right(k - 1);
  return *right_[site];
}

void EnvironmentCache::note_site_changed(std::size_t site) {
  if (site >= length()) throw RangeError("environment: site out of range");
  for (std::size_t k = site + 1; k < length(); ++k) left_[k].reset();
  for (std::size_t k = 0; k < site && k < length(); ++k) right_[k].reset();
}

namespace {

Tensor local_matrix(EnvironmentCache& env, std::size_t site) {
  const Tensor& l = env.left(site);
  const Tensor& r = env.right(site);
  Tensor o = env.op().site(site).renamed(std::vector<LabelPair>{
      {bond_label(site), o_label(site)},
      {bond_label(site + 1), o_label(site + 1)}});
  Tensor lo = contract(l, o, {{o_label(site), o_label(site)}});
  Tensor m = contract(lo, r, {{o_label(site + 1), o_label(site + 1)}});
  std::vector<std::string> order{b_label(site),     row_label(site),
                                 b_label(site + 1), k_label(site),
                                 col_label(site),   k_label(site + 1)};
  return m.transposed(std::span<const std::string>(order));
}

Tensor as_site_tensor(const Tensor& eigvec, std::size_t site) {
  return eigvec.renamed(std::vector<LabelPair>{
      {k_label(site), bond_label(site)},
      {col_label(site), phys_label(site)},
      {k_label(site + 1), bond_label(site + 1)}});
}

// Thin QR padded back to the full width, so bond extents never change:
// m = q . r with q's leading columns orthonormal.
void padded_qr(const Matrix& m, Matrix& q, Matrix& r) {
  const Eigen::Index rank = std::min(m.rows(), m.cols());
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix thin_q = qr.householderQ() * Matrix::Identity(m.rows(), rank);
  Matrix thin_r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  q = Matrix::Zero(m.rows(), m.cols());
  q.leftCols(rank) = thin_q;
  r = Matrix::Zero(m.cols(), m.cols());
  r.topRows(rank) = thin_r;
}

// Gauge move across the bond between site and site+1 (rightward: the left
// factor becomes orthonormal) or between site-1 and site (leftward). Inserts
// q . r = identity-equivalent factors, so the represented state is unchanged.
void shift_gauge(MatrixProductState& s, std::size_t site, bool rightward) {
  if (rightward) {
    const std::string b = bond_label(site + 1);
    std::vector<std::string> rows{bond_label(site), phys_label(site)};
    std::vector<std::string> cols{b};
    Matrix m = s.site(site).to_matrix(rows, cols);
    Matrix q, r;
    padded_qr(m, q, r);
    Tensor qt = Tensor::from_matrix(
        q, rows, {s.site(site).dim(rows[0]), s.site(site).dim(rows[1])}, cols,
        {s.site(site).dim(b)});
    Tensor rt = Tensor::from_matrix(r, {b}, {s.site(site).dim(b)}, {"_g"},
                                    {s.site(site).dim(b)});
    Tensor next = contract(rt, s.site(site + 1), {{"_g", b}});
    s.set_site(site, qt);
    s.set_site(site + 1, next);
  } else {
    const std::string b = bond_label(site);
    std::vector<std::string> rows{b};
    std::vector<std::string> cols{phys_label(site), bond_label(site + 1)};
    Matrix m = s.site(site).to_matrix(rows, cols);
    Matrix q, r;
    padded_qr(m.adjoint(), q, r);
    Matrix qm = q.adjoint();  // right-orthonormal rows
    Matrix lm = r.adjoint();
    Tensor qt = Tensor::from_matrix(
        qm, rows, {s.site(site).dim(b)}, cols,
        {s.site(site).dim(cols[0]), s.site(site).dim(cols[1])});
    Tensor lt = Tensor::from_matrix(lm, {"_g"}, {s.site(site).dim(b)}, {b},
                                    {s.site(site).dim(b)});
    Tensor prev = contract(s.site(site - 1), lt, {{b, "_g"}});
    s.set_site(site, qt);
    s.set_site(site - 1, prev);
  }
}

}  // namespace

LocalMatrices local_problem(EnvironmentCache& h_env, EnvironmentCache& n_env,
                            std::size_t site) {
  if (h_env.length() != n_env.length())
    throw ShapeError("local problem: caches disagree on length");
  return LocalMatrices{local_matrix(h_env, site), local_matrix(n_env, site)};
}

SiteUpdate optimize_site(EnvironmentCache& h_env, EnvironmentCache& n_env,
                         MatrixProductState& state, std::size_t site,
                         double tol) {
  LocalMatrices lm = local_problem(h_env, n_env, site);
  EigenPair pair = gen_eig_smallest(lm.hmat, lm.nmat, tol);

  std::vector<std::string> rows{b_label(site), row_label(site),
                                b_label(site + 1)};
  std::vector<std::string> cols{k_label(site), col_label(site),
                                k_label(site + 1)};
  Matrix H = lm.hmat.to_matrix(rows, cols);
  Matrix N = lm.nmat.to_matrix(rows, cols);
  std::vector<std::string> none;
  Vector v =
      pair.vector.to_matrix(cols, std::span<const std::string>(none)).col(0);
  double residual = (H * v - pair.value * (N * v)).norm();

  state.set_site(site, as_site_tensor(pair.vector, site));
  h_env.note_site_changed(site);
  n_env.note_site_changed(site);
  return SiteUpdate{pair.value, residual};
}

SweepResult sweep(const MatrixProductOperator& h, const MatrixProductState& s0,
                  std::size_t max_sweeps, double tol,
                  const SweepOptions& options) {
  if (max_sweeps < 1)
    throw PreconditionError("sweep: max_sweeps must be >= 1");
  if (h.length() != s0.length() || h.phys_dim() != s0.phys_dim())
    throw ShapeError("sweep: operator and state disagree");

  SweepResult out{s0, {}};
  SweepReport& report = out.report;

  if (options.verify_hermitian && h.length() <= 10) {
    Matrix dense = oracle::dense_operator(h);
    if ((dense - dense.adjoint()).norm() > 1e-10 * std::max(dense.norm(), 1.0))
      report.warnings.push_back("operator is not Hermitian at dense scale");
  }

  MatrixProductState& s = out.state;
  const std::size_t n = s.length();

  // Gauge-condition the start state (rightmost sites orthonormal) so the
  // local metric stays well conditioned; the represented state is unchanged.
  for (std::size_t k = n; k-- > 1;) shift_gauge(s, k, false);

  EnvironmentCache h_env(h, s);
  EnvironmentCache n_env = EnvironmentCache::metric(s);

  // One-time right-environment initialization; later passes reuse exactly
  // one absorption per step.
  if (n >= 2) {
    h_env.right(1);
    n_env.right(1);
  }
  report.init_op_absorptions = h_env.absorptions();
  report.init_metric_absorptions = n_env.absorptions();

  double last_energy = 0.0;
  bool have_last = false;
  for (std::size_t pass = 0; pass < max_sweeps; ++pass) {
    std::vector<std::size_t> order;
    if (pass == 0) {
      for (std::size_t k = 0; k < n; ++k) order.push_back(k);
    } else if (pass % 2 == 1) {
      for (std::size_t k = n >= 2 ? n - 1 : 1; k-- > 0;) order.push_back(k);
    } else {
      for (std::size_t k = 1; k < n; ++k) order.push_back(k);
    }
    if (order.empty()) order.push_back(0);

    double pass_energy = 0.0;
    for (std::size_t idx = 0; idx < order.size(); ++idx) {
      const std::size_t site = order[idx];
      auto op_before = h_env.absorptions();
      auto metric_before = n_env.absorptions();
      auto madds_before = tensor_counters().multiply_adds;
      SiteUpdate update = optimize_site(h_env, n_env, s, site, options.eig_tol);

      // Shift the orthonormality center toward the next site to keep the
      // metric conditioned; a pure gauge move, the state is unchanged.
      std::size_t next_site = site;
      if (idx + 1 < order.size()) {
        next_site = order[idx + 1];
      } else if (pass + 1 < max_sweeps && n >= 2) {
        next_site = (pass % 2 == 0) ? n - 2 : 1;  // first site of the next pass
      }
      if (next_site == site + 1) {
        shift_gauge(s, site, true);
        h_env.note_site_changed(site);
        h_env.note_site_changed(site + 1);
        n_env.note_site_changed(site);
        n_env.note_site_changed(site + 1);
      } else if (next_site + 1 == site) {
        shift_gauge(s, site, false);
        h_env.note_site_changed(site);
        h_env.note_site_changed(site - 1);
        n_env.note_site_changed(site);
        n_env.note_site_changed(site - 1);
      }

      report.steps.push_back(SweepStep{
          site, update.lambda, update.residual,
          h_env.absorptions() - op_before, n_env.absorptions() - metric_before,
          tensor_counters().multiply_adds - madds_before});
      pass_energy = update.lambda;
    }
    report.sweep_energies.push_back(pass_energy);
    if (options.log_global) {
      Complex num = expectation(s, h, s);
      Complex den = inner(s, s);
      report.global_energies.push_back((num / den).real());
    }
    if (have_last && std::abs(pass_energy - last_energy) < tol) {
      report.converged = true;
      break;
    }
    last_energy = pass_energy;
    have_last = true;
  }
  return out;
}

}  // namespace automps
