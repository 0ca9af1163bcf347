#include "automps/oracle.hpp"

#include "automps/errors.hpp"

namespace automps::oracle {

Vector dense_state(const MatrixProductState& s) {
  const std::size_t n = s.length();
  if (n > 16) throw SizeError("dense_state: more than 16 sites");
  const std::size_t d = s.phys_dim();

  if (s.boundary() == Boundary::open) {
    // Left fold: rows enumerate the words seen so far, columns the open bond.
    std::size_t words = 1;
    Matrix fold = Matrix::Ones(1, 1);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::string> lk{bond_label(k)}, rk{bond_label(k + 1)};
      std::size_t right = s.site(k).dim(bond_label(k + 1));
      Matrix next(static_cast<Eigen::Index>(words * d),
                  static_cast<Eigen::Index>(right));
      for (std::size_t p = 0; p < d; ++p) {
        Matrix mk = s.site(k).sliced(phys_label(k), p).to_matrix(lk, rk);
        for (std::size_t row = 0; row < words; ++row)
          next.row(static_cast<Eigen::Index>(row * d + p)) =
              fold.row(static_cast<Eigen::Index>(row)) * mk;
      }
      fold = std::move(next);
      words *= d;
    }
    return fold.col(0);
  }

  // Periodic: carry the wrap bond through the fold and trace at the end.
  const auto w = static_cast<Eigen::Index>(s.bond_extent(0));
  std::vector<Matrix> fold_rows{Matrix::Identity(w, w)};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::string> lk{bond_label(k)}, rk{bond_label(k + 1)};
    std::vector<Matrix> next;
    next.reserve(fold_rows.size() * d);
    for (const Matrix& m : fold_rows)
      for (std::size_t p = 0; p < d; ++p)
        next.push_back(m * s.site(k).sliced(phys_label(k), p).to_matrix(lk, rk));
    fold_rows = std::move(next);
  }
  Vector out(static_cast<Eigen::Index>(fold_rows.size()));
  for (std::size_t i = 0; i < fold_rows.size(); ++i)
    out(static_cast<Eigen::Index>(i)) = fold_rows[i].trace();
  return out;
}

Matrix dense_operator(const MatrixProductOperator& m) {
  const std::size_t n = m.length();
  if (n > 10) throw SizeError("dense_operator: more than 10 sites");
  const std::size_t d = m.phys_dim();
  if (m.boundary() != Boundary::open) {
    // Periodic operators fold like the periodic state, over (row, col) pairs.
    std::size_t w = m.bond_extent(0);
    std::vector<Matrix> fold{Matrix::Identity(static_cast<Eigen::Index>(w),
                                              static_cast<Eigen::Index>(w))};
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<std::string> lk{bond_label(k)}, rk{bond_label(k + 1)};
      std::vector<Matrix> next;
      next.reserve(fold.size() * d * d);
      for (const Matrix& f : fold)
        for (std::size_t pr = 0; pr < d; ++pr)
          for (std::size_t pc = 0; pc < d; ++pc)
            next.push_back(f * m.site(k)
                                   .sliced(row_label(k), pr)
                                   .sliced(col_label(k), pc)
                                   .to_matrix(lk, rk));
      fold = std::move(next);
    }
    std::size_t dim = 1;
    for (std::size_t k = 0; k < n; ++k) dim *= d;
    Matrix out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c) {
        // Recover the interleaved (row, col) fold position.
        std::size_t pos = 0;
        std::size_t rr = r, cc = c;
        std::vector<std::size_t> rdig(n), cdig(n);
        for (std::size_t k = n; k-- > 0;) {
          rdig[k] = rr % d;
          rr /= d;
          cdig[k] = cc % d;
          cc /= d;
        }
        for (std::size_t k = 0; k < n; ++k) pos = (pos * d + rdig[k]) * d + cdig[k];
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            fold[pos].trace();
      }
    return out;
  }

  std::size_t pairs = 1;
  Matrix fold = Matrix::Ones(1, 1);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::string> lk{bond_label(k)}, rk{bond_label(k + 1)};
    std::size_t right = m.site(k).dim(bond_label(k + 1));
    Matrix next(static_cast<Eigen::Index>(pairs * d * d),
                static_cast<Eigen::Index>(right));
    for (std::size_t pr = 0; pr < d; ++pr)
      for (std::size_t pc = 0; pc < d; ++pc) {
        Matrix mk = m.site(k)
                        .sliced(row_label(k), pr)
                        .sliced(col_label(k), pc)
                        .to_matrix(lk, rk);
        for (std::size_t row = 0; row < pairs; ++row)
          next.row(static_cast<Eigen::Index>((row * d + pr) * d + pc)) =
              fold.row(static_cast<Eigen::Index>(row)) * mk;
      }
    fold = std::move(next);
    pairs *= d * d;
  }

  std::size_t dim = 1;
  for (std::size_t k = 0; k < n; ++k) dim *= d;
  Matrix out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      std::size_t pos = 0;
      std::size_t rr = r, cc = c;
      std::vector<std::size_t> rdig(n), cdig(n);
      for (std::size_t k = n; k-- > 0;) {
        rdig[k] = rr % d;
        rr /= d;
        cdig[k] = cc % d;
        cc /= d;
      }
      for (std::size_t k = 0; k < n; ++k) pos = (pos * d + rdig[k]) * d + cdig[k];
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          fold(static_cast<Eigen::Index>(pos), 0);
    }
  return out;
}

GroundState exact_ground(const Matrix& h) {
  if (h.rows() != h.cols())
    throw ShapeError("exact_ground: matrix is not square");
  double scale = std::max(h.norm(), 1.0);
  if ((h - h.adjoint()).norm() > 1e-10 * scale)
    throw HermiticityError("exact_ground: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint().eval()) / 2.0);
  return GroundState{es.eigenvalues()(0), es.eigenvectors().col(0)};
}

std::vector<Word> all_words(const std::vector<std::string>& alphabet,
                            std::size_t n) {
  std::vector<Word> out;
  double total = std::pow(static_cast<double>(alphabet.size()),
                          static_cast<double>(n));
  out.reserve(static_cast<std::size_t>(total));
  Word current(n, alphabet.empty() ? std::string() : alphabet[0]);
  std::vector<std::size_t> idx(n, 0);
  while (true) {
    out.push_back(current);
    std::size_t k = n;
    while (k-- > 0) {
      if (++idx[k] < alphabet.size()) {
        current[k] = alphabet[idx[k]];
        break;
      }
      idx[k] = 0;
      current[k] = alphabet[0];
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

std::map<Word, Complex> enumerate_words(const WeightedAutomaton& a,
                                        std::size_t n) {
  double count = std::pow(static_cast<double>(a.alphabet.size()),
                          static_cast<double>(n));
  if (count > static_cast<double>(1 << 20))
    throw SizeError("enumerate_words: alphabet^n exceeds 2^20");
  std::map<Word, Complex> out;
  for (const Word& w : all_words(a.alphabet, n))
    out.emplace(w, evaluate(a, std::span<const std::string>(w)));
  return out;
}

}  // namespace automps::oracle
