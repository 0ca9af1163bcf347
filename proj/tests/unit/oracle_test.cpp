#include "automps/oracle.hpp"

#include "automps/models.hpp"
#include "automps/mp_compile.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace automps;
using namespace automps::testing;

TEST_CASE("dense_state of the three-site one-excitation state") {
  auto s = unroll_mps(models::w_state_automaton(), 3).state();
  Vector v = oracle::dense_state(s);
  REQUIRE(v.size() == 8);
  for (Eigen::Index i = 0; i < 8; ++i) {
    bool hot = i == 0b100 || i == 0b010 || i == 0b001;
    CHECK(v(i) == Complex(hot ? 1.0 : 0.0));
  }
}

TEST_CASE("dense_state of a product state is a Kronecker product") {
  std::vector<Tensor> sites;
  Vector k0(2), k1(2), k2(2);
  k0 << 1, 2;
  k1 << 3, -1;
  k2 << 0.5, 0.25;
  std::vector<Vector> kets{k0, k1, k2};
  for (std::size_t k = 0; k < 3; ++k) {
    Tensor t({bond_label(k), phys_label(k), bond_label(k + 1)}, {1, 2, 1});
    t.at(std::vector<std::size_t>{0, 0, 0}) = kets[k](0);
    t.at(std::vector<std::size_t>{0, 1, 0}) = kets[k](1);
    sites.push_back(std::move(t));
  }
  MatrixProductState s(std::move(sites), 2);
  Vector v = oracle::dense_state(s);
  for (std::size_t i = 0; i < 8; ++i)
    CHECK(v(static_cast<Eigen::Index>(i)) ==
          kets[0]((i >> 2) & 1) * kets[1]((i >> 1) & 1) * kets[2](i & 1));
}

TEST_CASE("dense_state of the zero chain is the zero vector") {
  std::vector<Tensor> sites;
  for (std::size_t k = 0; k < 3; ++k)
    sites.emplace_back(
        std::vector<std::string>{bond_label(k), phys_label(k), bond_label(k + 1)},
        std::vector<std::size_t>{1, 2, 1});
  MatrixProductState s(std::move(sites), 2);
  CHECK(oracle::dense_state(s).norm() == 0.0);
}

TEST_CASE("dense_state agrees with per-word amplitudes for the corpus") {
  for (const auto& a :
       {models::w_state_automaton(), models::cat_state_automaton(),
        models::neighbor_state_automaton(), models::ends_in_two_dfa()}) {
    for (std::size_t n = 1; n <= 8; ++n) {
      auto s = unroll_mps(a, n).state();
      Vector v = oracle::dense_state(s);
      auto words = oracle::enumerate_words(a, n);
      std::size_t row = 0;
      for (const auto& [word, value] : words) {
        // Words enumerate in lexicographic symbol order = row-major index.
        (void)word;
        CHECK(std::abs(v(static_cast<Eigen::Index>(row)) - value) <= 1e-12);
        ++row;
      }
    }
  }
}

TEST_CASE("dense_operator examples") {
  CHECK((oracle::dense_operator(MatrixProductOperator::identity(3, 2)) -
         Matrix::Identity(8, 8))
            .norm() <= 1e-12);

  auto coupling = unroll_mpo(models::neighbor_xx_automaton(), 4).op();
  Matrix want = op_term(4, {{0, pauli_x()}, {1, pauli_x()}}) +
                op_term(4, {{1, pauli_x()}, {2, pauli_x()}}) +
                op_term(4, {{2, pauli_x()}, {3, pauli_x()}});
  CHECK((oracle::dense_operator(coupling) - want).norm() <= 1e-12);

  auto field = unroll_mpo(models::field_z_automaton(), 4).op();
  Matrix fwant = op_term(4, {{0, pauli_z()}}) + op_term(4, {{1, pauli_z()}}) +
                 op_term(4, {{2, pauli_z()}}) + op_term(4, {{3, pauli_z()}});
  CHECK((oracle::dense_operator(field) - fwant).norm() <= 1e-12);
}

TEST_CASE("dense_operator respects sum and scale linearity") {
  auto coupling = models::neighbor_xx_automaton();
  auto scaled = scale(coupling, Complex(0.0, 2.0));
  for (std::size_t n = 2; n <= 4; ++n) {
    Matrix base = oracle::dense_operator(unroll_mpo(coupling, n).op());
    Matrix s = oracle::dense_operator(unroll_mpo(scaled, n).op());
    CHECK((s - Complex(0.0, 2.0) * base).norm() <= 1e-12 * base.norm());
  }
}

TEST_CASE("exact_ground examples") {
  Matrix d(2, 2);
  d << 3, 0, 0, -1;
  auto gs = oracle::exact_ground(d);
  CHECK(gs.energy == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(gs.vector(1)) == doctest::Approx(1.0).epsilon(1e-10));

  // -sum Z on three sites: ground energy -3 with all spins up.
  Matrix h = -op_term(3, {{0, pauli_z()}}) - op_term(3, {{1, pauli_z()}}) -
             op_term(3, {{2, pauli_z()}});
  auto g3 = oracle::exact_ground(h);
  CHECK(g3.energy == doctest::Approx(-3.0).epsilon(1e-12));
  CHECK(std::abs(g3.vector(0)) == doctest::Approx(1.0).epsilon(1e-10));

  auto gid = oracle::exact_ground(Matrix::Identity(4, 4));
  CHECK(gid.energy == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(gid.vector.norm() - 1.0) <= 1e-12);
}

TEST_CASE("exact_ground rejects non-Hermitian input") {
  Matrix m(2, 2);
  m << 0, 1, 0, 0;
  CHECK_THROWS_AS(oracle::exact_ground(m), HermiticityError);
}

TEST_CASE("enumerate_words") {
  auto words = oracle::enumerate_words(models::w_state_automaton(), 4);
  std::size_t nonzero = 0;
  for (const auto& [w, v] : words)
    if (v != Complex(0.0)) ++nonzero;
  CHECK(words.size() == 16);
  CHECK(nonzero == 4);

  auto unit = oracle::enumerate_words(models::unit_automaton(SymbolKind::state), 5);
  for (const auto& [w, v] : unit) CHECK(v == Complex(1.0));

  auto scaled =
      oracle::enumerate_words(scale(models::w_state_automaton(), 3.0), 4);
  for (const auto& [w, v] : scaled)
    CHECK(std::abs(v - 3.0 * words.at(w)) <= 1e-12);
}

TEST_CASE("size guards are hard errors") {
  auto w = models::w_state_automaton();
  CHECK_THROWS_AS(oracle::enumerate_words(w, 21), SizeError);
  auto s = MatrixProductState::random(17, 2, 2, 1);
  CHECK_THROWS_AS(oracle::dense_state(s), SizeError);
  auto op = unroll_mpo(models::field_z_automaton(), 11).op();
  CHECK_THROWS_AS(oracle::dense_operator(op), SizeError);
}
