#include "automps/tensor.hpp"

#include "doctest.h"
#include "test_helpers.hpp"

using namespace automps;
using namespace automps::testing;

namespace {

Tensor identity2(const std::string& a, const std::string& b) {
  Tensor t({a, b}, {2, 2});
  t.at(std::vector<std::size_t>{0, 0}) = 1.0;
  t.at(std::vector<std::size_t>{1, 1}) = 1.0;
  return t;
}

}  // namespace

TEST_CASE("contract composes identities") {
  Tensor a = identity2("i", "j");
  Tensor b = identity2("j", "k");
  Tensor c = contract(a, b, {{"j", "j"}});
  REQUIRE(c.labels() == std::vector<std::string>{"i", "k"});
  CHECK(c.at({0, 0}) == Complex(1.0));
  CHECK(c.at({1, 1}) == Complex(1.0));
  CHECK(c.at({0, 1}) == Complex(0.0));
  CHECK(c.at({1, 0}) == Complex(0.0));
}

TEST_CASE("contract reproduces the one-excitation chain walkthrough") {
  // A = [u d], B = C = [[u, d], [0, u]], D = [d; u] with u/d the basis kets.
  auto site_matrix = [](const std::string& l, const std::string& p,
                        const std::string& r) {
    Tensor t({l, p, r}, {2, 2, 2});
    t.at(std::vector<std::size_t>{0, 0, 0}) = 1.0;  // up on the diagonal
    t.at(std::vector<std::size_t>{1, 0, 1}) = 1.0;
    t.at(std::vector<std::size_t>{0, 1, 1}) = 1.0;  // down moves to track 2
    return t;
  };
  Tensor a({"pa", "i"}, {2, 2});
  a.at(std::vector<std::size_t>{0, 0}) = 1.0;  // up stays on track 1
  a.at(std::vector<std::size_t>{1, 1}) = 1.0;  // down jumps to track 2
  Tensor b = site_matrix("i", "pb", "j");
  Tensor c = site_matrix("j", "pc", "k");
  Tensor d({"k", "pd"}, {2, 2});
  d.at(std::vector<std::size_t>{0, 1}) = 1.0;  // track 1 must still emit down
  d.at(std::vector<std::size_t>{1, 0}) = 1.0;

  Tensor bc = contract(b, c, {{"j", "j"}});
  Tensor abc = contract(a, bc, {{"i", "i"}});
  Tensor full = contract(abc, d, {{"k", "k"}});

  // Exactly the four one-down-spin terms survive.
  auto amp = [&](std::size_t pa, std::size_t pb, std::size_t pc, std::size_t pd) {
    return full.transposed({"pa", "pb", "pc", "pd"})
        .at({pa, pb, pc, pd});
  };
  CHECK(amp(0, 0, 1, 0) == Complex(1.0));
  CHECK(amp(0, 0, 0, 1) == Complex(1.0));
  CHECK(amp(0, 1, 0, 0) == Complex(1.0));
  CHECK(amp(1, 0, 0, 0) == Complex(1.0));
  CHECK(amp(0, 0, 0, 0) == Complex(0.0));
  CHECK(amp(1, 1, 0, 0) == Complex(0.0));
  CHECK(amp(1, 0, 0, 1) == Complex(0.0));
}

TEST_CASE("full self-contraction gives the squared Frobenius norm") {
  auto gen = rng(42);
  Tensor t = random_tensor({"a", "b", "c"}, {2, 3, 4}, gen);
  double direct = 0.0;
  for (const auto& v : t.data()) direct += std::norm(v);
  Tensor closed =
      contract(t.conjugate(), t, {{"a", "a"}, {"b", "b"}, {"c", "c"}});
  CHECK(std::abs(closed.scalar_value() - Complex(direct)) <= 1e-12 * direct);
}

TEST_CASE("contract errors") {
  Tensor a({"i", "j"}, {2, 3});
  Tensor b({"k"}, {4});
  CHECK_THROWS_AS(contract(a, b, {{"j", "k"}}), DimensionError);
  CHECK_THROWS_AS(contract(a, b, {{"x", "k"}}), LabelError);
  Tensor c({"i"}, {2});
  CHECK_THROWS_AS(contract(a, c, {{"j", "i"}}), DimensionError);
}

TEST_CASE("tensor construction enforces its invariants") {
  CHECK_THROWS_AS(Tensor({"i", "i"}, {2, 2}), LabelError);
  CHECK_THROWS_AS(Tensor({"i"}, {0}), DimensionError);
  CHECK_THROWS_AS(Tensor({"i"}, {2}, std::vector<Complex>(3)), DimensionError);
  Tensor scalar = Tensor::scalar(Complex(2.5));
  CHECK(scalar.rank() == 0);
  CHECK(scalar.scalar_value() == Complex(2.5));
}

TEST_CASE("contract is bilinear and associative on random tensors") {
  auto gen = rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor a = random_tensor({"i", "j"}, {3, 2}, gen);
    Tensor b = random_tensor({"j", "k"}, {2, 4}, gen);
    Tensor c = random_tensor({"k", "l"}, {4, 3}, gen);
    Complex alpha(0.7, -0.3);

    Tensor lhs = contract(a.scaled(alpha), b, {{"j", "j"}});
    Tensor rhs = contract(a, b, {{"j", "j"}}).scaled(alpha);
    CHECK((lhs - rhs).norm() <= 1e-12 * rhs.norm());

    Tensor ab_c = contract(contract(a, b, {{"j", "j"}}), c, {{"k", "k"}});
    Tensor a_bc = contract(a, contract(b, c, {{"k", "k"}}), {{"j", "j"}});
    CHECK((ab_c - a_bc).norm() <= 1e-12 * ab_c.norm());
  }
}

TEST_CASE("svd of an isometry has unit singular values") {
  Tensor t = identity2("i", "j");
  SvdSplit split = svd_split(t, {"i"});
  REQUIRE(split.s.size() == 2);
  CHECK(split.s[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(split.s[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("svd of a rank-1 outer product of unit vectors") {
  Tensor t({"i", "j"}, {3, 2});
  // outer product of (1,0,0) and (0.6, 0.8)
  t.at(std::vector<std::size_t>{0, 0}) = 0.6;
  t.at(std::vector<std::size_t>{0, 1}) = 0.8;
  SvdSplit split = svd_split(t, {"i"});
  CHECK(split.s[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 1; k < split.s.size(); ++k)
    CHECK(split.s[k] <= 1e-14);
}

TEST_CASE("svd exposes a redundantly embedded bond") {
  // Two-track diagonal site pair with the shared bond embedded into extent 3
  // through an isometry pair: only two singular values survive.
  Tensor b({"l", "p", "m"}, {2, 2, 2});
  b.at(std::vector<std::size_t>{0, 0, 0}) = 1.0;
  b.at(std::vector<std::size_t>{1, 1, 1}) = 1.0;
  Tensor c = b.renamed(std::vector<LabelPair>{{"l", "m"}, {"m", "r"}, {"p", "q"}});

  Matrix embed(2, 3), restore(3, 2);
  embed << 1, 0, 0, 0, 0, 1;
  restore << 1, 0, 0, 0, 0, 1;
  Tensor embed_t = Tensor::from_matrix(embed, {"m"}, {2}, {"m3"}, {3});
  Tensor restore_t = Tensor::from_matrix(restore, {"m3"}, {3}, {"m"}, {2});

  Tensor b3 = contract(b, embed_t, {{"m", "m"}});
  Tensor c3 = contract(restore_t, c, {{"m", "m"}});
  Tensor theta = contract(b3, c3, {{"m3", "m3"}});

  SvdSplit split = svd_split(theta, {"l", "p"});
  std::size_t above = 0;
  for (double v : split.s)
    if (v > 1e-12) ++above;
  CHECK(above == 2);
}

TEST_CASE("svd reconstructs and matches a spectral oracle") {
  auto gen = rng(11);
  Tensor t = random_tensor({"a", "b", "c"}, {3, 4, 2}, gen);
  SvdSplit split = svd_split(t, {"b"});

  // Reconstruction u . diag(s) . v within 1e-12 relative.
  Tensor sv({"_svd", "_s2"}, {split.s.size(), split.s.size()});
  for (std::size_t i = 0; i < split.s.size(); ++i)
    sv.at(std::vector<std::size_t>{i, i}) = split.s[i];
  Tensor rebuilt = contract(contract(split.u, sv, {{"_svd", "_svd"}}),
                            split.v, {{"_s2", "_svd"}});
  Tensor diff = rebuilt - t.transposed({"b", "a", "c"});
  CHECK(diff.norm() <= 1e-12 * t.norm());

  // Singular values vs the eigenvalues of the Gram matrix.
  std::vector<std::string> rows{"b"}, cols{"a", "c"};
  Matrix m = t.to_matrix(rows, cols);
  Eigen::SelfAdjointEigenSolver<Matrix> es(m * m.adjoint());
  for (std::size_t i = 0; i < split.s.size(); ++i) {
    double want = std::sqrt(std::max(0.0, es.eigenvalues()(
                                              static_cast<Eigen::Index>(
                                                  split.s.size() - 1 - i))));
    CHECK(std::abs(split.s[i] - want) <= 1e-12 * split.s[0]);
  }

  // Orthonormal factors.
  std::vector<std::string> urows{"b"}, ucols{"_svd"};
  Matrix u = split.u.to_matrix(urows, ucols);
  CHECK((u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).norm() <=
        1e-12);
  std::vector<std::string> vrows{"_svd"}, vcols{"a", "c"};
  Matrix v = split.v.to_matrix(vrows, vcols);
  CHECK((v * v.adjoint() - Matrix::Identity(v.rows(), v.rows())).norm() <=
        1e-12);
}

TEST_CASE("svd split errors") {
  Tensor t({"a", "b"}, {2, 2});
  CHECK_THROWS_AS(svd_split(t, std::initializer_list<std::string>{}),
                  SplitError);
  CHECK_THROWS_AS(svd_split(t, {"a", "b"}), SplitError);
}

TEST_CASE("smallest generalized eigenpair of a diagonal problem") {
  Tensor h({"i", "j"}, {2, 2});
  h.at(std::vector<std::size_t>{0, 0}) = 2.0;
  h.at(std::vector<std::size_t>{1, 1}) = 1.0;
  Tensor n = identity2("i", "j");
  EigenPair pair = gen_eig_smallest(h, n, 1e-12);
  CHECK(pair.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(pair.vector.at({0})) <= 1e-10);
  CHECK(std::abs(pair.vector.at({1})) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("identical SPD forms give lambda = 1") {
  auto gen = rng(3);
  Tensor r = random_tensor({"i", "j"}, {4, 4}, gen);
  std::vector<std::string> rows{"i"}, cols{"j"};
  Matrix m = r.to_matrix(rows, cols);
  Matrix spd = m * m.adjoint() + 0.5 * Matrix::Identity(4, 4);
  Tensor h = Tensor::from_matrix(spd, {"i"}, {4}, {"j"}, {4});
  EigenPair pair = gen_eig_smallest(h, h, 1e-12);
  CHECK(pair.value == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("generalized eigenpair matches the dense full-spectrum oracle") {
  auto gen = rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix a(8, 8), b(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i)
      for (Eigen::Index j = 0; j < 8; ++j) {
        a(i, j) = Complex(u(gen), u(gen));
        b(i, j) = Complex(u(gen), u(gen));
      }
    Matrix H = a + a.adjoint();
    Matrix N = b * b.adjoint() + 0.1 * Matrix::Identity(8, 8);

    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> oracle(H, N);
    double want = oracle.eigenvalues()(0);

    Tensor h = Tensor::from_matrix(H, {"i"}, {8}, {"j"}, {8});
    Tensor n = Tensor::from_matrix(N, {"i"}, {8}, {"j"}, {8});
    EigenPair pair = gen_eig_smallest(h, n, 1e-12);
    CHECK(std::abs(pair.value - want) <= 1e-10);
  }
}

TEST_CASE("generalized eigenpair residual holds on random SPD instances") {
  auto gen = rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> size(2, 16);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Index m = size(gen);
    Matrix a(m, m), b(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = 0; j < m; ++j) {
        a(i, j) = Complex(u(gen), u(gen));
        b(i, j) = Complex(u(gen), u(gen));
      }
    Matrix H = a + a.adjoint();
    Matrix N = b * b.adjoint() + 0.05 * Matrix::Identity(m, m);
    Tensor h = Tensor::from_matrix(H, {"i"}, {static_cast<std::size_t>(m)},
                                   {"j"}, {static_cast<std::size_t>(m)});
    Tensor n = Tensor::from_matrix(N, {"i"}, {static_cast<std::size_t>(m)},
                                   {"j"}, {static_cast<std::size_t>(m)});
    EigenPair pair = gen_eig_smallest(h, n, 1e-10);

    std::vector<std::string> rows{"i"}, cols{"j"}, none;
    Vector v = pair.vector.to_matrix(cols, std::span<const std::string>(none))
                   .col(0);
    CHECK((H * v - pair.value * (N * v)).norm() <= 1e-10 * H.norm());
    CHECK(std::abs((v.adjoint() * N * v)(0, 0).real() - 1.0) <= 1e-10);
  }
}

TEST_CASE("degenerate metric is projected out, zero metric rejected") {
  // n has a null direction aligned with h's smallest eigenvector; the
  // answer comes from the complement.
  Matrix H(2, 2), N(2, 2);
  H << 5, 0, 0, 1;
  N << 1, 0, 0, 0;
  Tensor h = Tensor::from_matrix(H, {"i"}, {2}, {"j"}, {2});
  Tensor n = Tensor::from_matrix(N, {"i"}, {2}, {"j"}, {2});
  EigenPair pair = gen_eig_smallest(h, n, 1e-12);
  CHECK(pair.value == doctest::Approx(5.0).epsilon(1e-10));

  Tensor zero({"i", "j"}, {2, 2});
  CHECK_THROWS_AS(gen_eig_smallest(h, zero, 1e-12), DegenerateMetricError);
}

TEST_CASE("merged groups indices into a composite label") {
  auto gen = rng(5);
  Tensor t = random_tensor({"a", "b", "c"}, {2, 3, 4}, gen);
  Tensor m = t.merged(std::vector<std::string>{"a", "b"}, "ab");
  REQUIRE(m.labels() == std::vector<std::string>{"ab", "c"});
  REQUIRE(m.dims() == std::vector<std::size_t>{6, 4});
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < 4; ++k)
        CHECK(m.at({i * 3 + j, k}) == t.at({i, j, k}));
}

TEST_CASE("trace_pairs closes a wrap bond") {
  auto gen = rng(9);
  Tensor t = random_tensor({"a", "b"}, {3, 3}, gen);
  std::vector<std::string> rows{"a"}, cols{"b"};
  Complex want = t.to_matrix(rows, cols).trace();
  CHECK(std::abs(trace_pairs(t, {{"a", "b"}}).scalar_value() - want) <= 1e-14);
}
