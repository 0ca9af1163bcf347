#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "automps/mp_state.hpp"

namespace automps {

/// Cached left/right partial contractions of the transfer tensors of
/// <state| op |state> on an open chain. left(k) covers sites [0, k), right(k)
/// covers sites (k, n-1]; both ends are trivial extent-1 boundaries. Entries
/// stay valid until a site they cover changes; recomputation absorbs one
/// transfer tensor per missing entry.
class EnvironmentCache {
 public:
  EnvironmentCache(const MatrixProductOperator& op,
                   const MatrixProductState& state);

  /// Cache for the norm network <state|state> (identity operator).
  static EnvironmentCache metric(const MatrixProductState& state);

  const Tensor& left(std::size_t site);
  const Tensor& right(std::size_t site);

  /// Invalidate every cached entry that covers the given site.
  void note_site_changed(std::size_t site);

  /// Number of transfer-tensor absorptions performed so far.
  std::uint64_t absorptions() const { return absorptions_; }
  /// Scalar multiply-adds spent inside this cache's contractions.
  std::uint64_t multiply_adds() const { return multiply_adds_; }

  std::size_t length() const { return state_->length(); }
  const MatrixProductOperator& op() const { return *op_; }
  const MatrixProductState& state() const { return *state_; }

 private:
  Tensor transfer(std::size_t k) const;
  Tensor boundary(std::size_t k) const;
  void absorb_left(std::size_t k);   // left(k) from left(k-1)
  void absorb_right(std::size_t k);  // right(k) from right(k+1)

  std::unique_ptr<MatrixProductOperator> owned_op_;
  const MatrixProductOperator* op_;
  const MatrixProductState* state_;
  std::vector<std::optional<Tensor>> left_;
  std::vector<std::optional<Tensor>> right_;
  std::uint64_t absorptions_ = 0;
  std::uint64_t multiply_adds_ = 0;
};

struct LocalMatrices {
  Tensor hmat;  // labels (B k, r k, B k+1, K k, c k, K k+1)
  Tensor nmat;
};

/// The quadratic forms of the energy and the norm in the site tensor: the
/// whole sandwich contracted except the site and its conjugate.
LocalMatrices local_problem(EnvironmentCache& h_env, EnvironmentCache& n_env,
                            std::size_t site);

struct SiteUpdate {
  double lambda;
  double residual;
};

/// Replaces the site tensor with the smallest generalized eigenvector of the
/// local problem and invalidates the covering cache entries.
SiteUpdate optimize_site(EnvironmentCache& h_env, EnvironmentCache& n_env,
                         MatrixProductState& state, std::size_t site,
                         double tol);

struct SweepStep {
  std::size_t site;
  double lambda;
  double residual;
  std::uint64_t op_absorptions;      // new absorptions in the op cache
  std::uint64_t metric_absorptions;  // new absorptions in the metric cache
  std::uint64_t multiply_adds;       // total contraction work for the step
};

struct SweepReport {
  std::vector<SweepStep> steps;
  std::vector<double> sweep_energies;   // lambda after each pass
  std::vector<double> global_energies;  // <S|H|S>/<S|S> after each pass
  std::uint64_t init_op_absorptions = 0;
  std::uint64_t init_metric_absorptions = 0;
  bool converged = false;
  std::vector<std::string> warnings;
};

struct SweepOptions {
  /// Check Hermiticity of the dense operator before sweeping (n <= 10).
  bool verify_hermitian = false;
  /// Record <S|H|S>/<S|S> after every pass.
  bool log_global = true;
  /// Tolerance handed to the local eigensolver.
  double eig_tol = 1e-12;
};

struct SweepResult {
  MatrixProductState state;
  SweepReport report;
};

/// One-site variational ground-state search: alternating left-to-right and
/// right-to-left passes with cached environments, until the per-pass energy
/// change drops below tol or max_sweeps passes were made.
SweepResult sweep(const MatrixProductOperator& h, const MatrixProductState& s0,
                  std::size_t max_sweeps, double tol,
                  const SweepOptions& options = {});

}  // namespace automps
