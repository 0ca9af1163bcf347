#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "automps/tensor.hpp"

namespace automps {

enum class Boundary { open, periodic };

/// Canonical index names for chain tensors.
std::string bond_label(std::size_t k);
std::string phys_label(std::size_t k);
std::string row_label(std::size_t k);
std::string col_label(std::size_t k);

/// Chain of site tensors with labels (bond k, phys k, bond k+1). Open
/// boundaries pin the end bonds to extent 1; periodic chains close the chain
/// by tracing bond n against bond 0.
class MatrixProductState {
 public:
  MatrixProductState(std::vector<Tensor> sites, std::size_t phys_dim,
                     Boundary boundary = Boundary::open);

  static MatrixProductState random(std::size_t n_sites, std::size_t phys_dim,
                                   std::size_t bond, std::uint64_t seed,
                                   Boundary boundary = Boundary::open);

  std::size_t length() const { return sites_.size(); }
  std::size_t phys_dim() const { return phys_dim_; }
  Boundary boundary() const { return boundary_; }
  const Tensor& site(std::size_t k) const;
  void set_site(std::size_t k, Tensor t);
  /// Extent of bond k, for k in [0, length()].
  std::size_t bond_extent(std::size_t k) const;

 private:
  void validate() const;
  std::vector<Tensor> sites_;
  std::size_t phys_dim_;
  Boundary boundary_;
};

/// Operator analog: site tensors carry labels (bond k, row k, col k,
/// bond k+1) with both physical extents equal to phys_dim.
class MatrixProductOperator {
 public:
  MatrixProductOperator(std::vector<Tensor> sites, std::size_t phys_dim,
                        Boundary boundary = Boundary::open);

  static MatrixProductOperator identity(std::size_t n_sites,
                                        std::size_t phys_dim,
                                        Boundary boundary = Boundary::open);

  std::size_t length() const { return sites_.size(); }
  std::size_t phys_dim() const { return phys_dim_; }
  Boundary boundary() const { return boundary_; }
  const Tensor& site(std::size_t k) const;
  void set_site(std::size_t k, Tensor t);
  std::size_t bond_extent(std::size_t k) const;

 private:
  void validate() const;
  std::vector<Tensor> sites_;
  std::size_t phys_dim_;
  Boundary boundary_;
};

/// Amplitude of one configuration (physical index per site).
Complex amplitude(const MatrixProductState& s,
                  std::span<const std::size_t> config);
Complex amplitude(const MatrixProductState& s,
                  std::initializer_list<std::size_t> config);

/// <bra|ket> by bond contraction in O(N).
Complex inner(const MatrixProductState& bra, const MatrixProductState& ket);

/// Transfer tensor at site k for <bra| op |ket>: the conjugated bra tensor,
/// operator tensor and ket tensor contracted over the physical indices.
/// Carries labels (B k, O k, K k, B k+1, O k+1, K k+1).
Tensor transfer_tensor(const MatrixProductState& bra,
                       const MatrixProductOperator& op,
                       const MatrixProductState& ket, std::size_t k);

/// Groups a transfer tensor's bond triples into single composite indices
/// ordered (bra, op, ket), giving a matrix over grouped left/right indices.
Tensor group_transfer(const Tensor& e, std::size_t k);

/// <bra| op |ket> via transfer tensors, O(N) for open chains.
Complex expectation(const MatrixProductState& bra,
                    const MatrixProductOperator& op,
                    const MatrixProductState& ket);

/// Inserts x . x_inv on an interior bond (1-based, between sites bond-1 and
/// bond): the left site absorbs x, the right site absorbs x_inv. x may be
/// rectangular as long as x . x_inv is the identity on the original bond.
MatrixProductState apply_gauge(const MatrixProductState& s, std::size_t bond,
                               const Matrix& x, const Matrix& x_inv);

/// Contracts the two tensors joined by an interior bond and splits them back
/// by SVD, keeping singular values above rel_tol times the largest.
MatrixProductState compress_bond(const MatrixProductState& s, std::size_t bond,
                                 double rel_tol);

}  // namespace automps
