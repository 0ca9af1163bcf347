#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "automps/errors.hpp"

namespace automps {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RowVector = Eigen::RowVectorXcd;

using LabelPair = std::pair<std::string, std::string>;

/// Running tally of contraction work, used to verify cost scaling claims.
struct ContractionCounters {
  std::uint64_t contractions = 0;
  std::uint64_t multiply_adds = 0;
};

/// Thread-local counters updated by contract().
ContractionCounters& tensor_counters();
void reset_tensor_counters();

/// Dense complex tensor with named indices, stored row-major over the label
/// order. Labels are unique within a tensor; contraction, transposition and
/// flattening address indices by name rather than by position.
class Tensor {
 public:
  /// Rank-0 tensor holding the single amplitude 0.
  Tensor();

  /// Zero-filled tensor.
  Tensor(std::vector<std::string> labels, std::vector<std::size_t> dims);

  Tensor(std::vector<std::string> labels, std::vector<std::size_t> dims,
         std::vector<Complex> data);

  static Tensor scalar(Complex value);

  std::size_t rank() const { return labels_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::size_t>& dims() const { return dims_; }

  bool has_label(const std::string& label) const;
  /// Position of a label; throws LabelError if absent.
  std::size_t axis(const std::string& label) const;
  std::size_t dim(const std::string& label) const;

  const std::vector<Complex>& data() const { return data_; }
  std::vector<Complex>& data() { return data_; }

  Complex at(std::span<const std::size_t> indices) const;
  Complex& at(std::span<const std::size_t> indices);
  Complex at(std::initializer_list<std::size_t> indices) const;

  /// Value of a rank-0 tensor.
  Complex scalar_value() const;

  Tensor conjugate() const;
  Tensor scaled(Complex factor) const;
  Tensor renamed(const std::string& from, const std::string& to) const;
  Tensor renamed(std::span<const LabelPair> renames) const;

  /// Copy with axes permuted into the given label order.
  Tensor transposed(std::span<const std::string> order) const;
  Tensor transposed(std::initializer_list<std::string> order) const;

  /// Fix one index to a value and drop its label.
  Tensor sliced(const std::string& label, std::size_t index) const;
  /// Restrict one index to [begin, begin+count).
  Tensor sliced(const std::string& label, std::size_t begin,
                std::size_t count) const;

  /// Fuse a group of labels (in the given order) into one composite label
  /// placed at the position of the first group member.
  Tensor merged(std::span<const std::string> group,
                const std::string& fused) const;

  double norm() const;

  /// Flatten into a matrix; row_labels + col_labels must exhaust the labels.
  Matrix to_matrix(std::span<const std::string> row_labels,
                   std::span<const std::string> col_labels) const;

  static Tensor from_matrix(const Matrix& m,
                            std::vector<std::string> row_labels,
                            std::vector<std::size_t> row_dims,
                            std::vector<std::string> col_labels,
                            std::vector<std::size_t> col_dims);

 private:
  void check_invariants() const;

  std::vector<std::string> labels_;
  std::vector<std::size_t> dims_;
  std::vector<Complex> data_;
};

/// Sum-of-products contraction over the given label pairs (first label in a,
/// second in b). Result carries the unpaired labels of a, then of b. An empty
/// pair list is an outer product.
Tensor contract(const Tensor& a, const Tensor& b,
                std::span<const LabelPair> pairs);
Tensor contract(const Tensor& a, const Tensor& b,
                std::initializer_list<LabelPair> pairs);

/// Sum over the diagonal of each label pair (both labels in t).
Tensor trace_pairs(const Tensor& t, std::span<const LabelPair> pairs);
Tensor trace_pairs(const Tensor& t, std::initializer_list<LabelPair> pairs);

Tensor operator+(const Tensor& a, const Tensor& b);
Tensor operator-(const Tensor& a, const Tensor& b);

struct SvdSplit {
  Tensor u;               // left labels + bond label
  std::vector<double> s;  // nonincreasing, nonnegative
  Tensor v;               // bond label + right labels
};

/// Split t = u . diag(s) . v along the given subset of labels. left_labels
/// must be a nonempty proper subset; bond_label must be fresh.
SvdSplit svd_split(const Tensor& t, std::span<const std::string> left_labels,
                   const std::string& bond_label = "_svd");
SvdSplit svd_split(const Tensor& t,
                   std::initializer_list<std::string> left_labels,
                   const std::string& bond_label = "_svd");

struct EigenPair {
  double value = 0.0;
  Tensor vector;  // carries the column-side labels of h
};

/// Smallest eigenpair of h.v = lambda n.v for Hermitian h and positive
/// semidefinite n, both flattened as square matrices whose rows are the first
/// half of the labels. A rank-deficient metric is handled by projecting onto
/// the span of its eigenvectors above 1e-10 of the largest eigenvalue; the
/// returned vector satisfies v* . n . v = 1.
EigenPair gen_eig_smallest(const Tensor& h, const Tensor& n, double tol);

/// Tensor with independent entries re, im uniform in [0, 1).
Tensor random_tensor(std::vector<std::string> labels,
                     std::vector<std::size_t> dims, std::mt19937_64& rng);

}  // namespace automps
