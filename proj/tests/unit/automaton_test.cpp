#include "automps/automaton.hpp"

#include <regex>

#include "automps/models.hpp"
#include "automps/oracle.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace automps;
using namespace automps::testing;

TEST_CASE("one-excitation automaton recognizes its pattern") {
  auto w = models::w_state_automaton();
  CHECK(evaluate(w, "0100") == Complex(1.0));
  CHECK(evaluate(w, "0110") == Complex(0.0));
  CHECK(evaluate(w, "0000") == Complex(0.0));
  CHECK(evaluate(w, "1") == Complex(1.0));
  CHECK_THROWS_AS(evaluate(w, "0102"), SymbolError);
  CHECK_THROWS_AS(evaluate(w, std::span<const std::string>()), PreconditionError);
}

TEST_CASE("unit automaton outputs 1 on every word") {
  auto u = models::unit_automaton(SymbolKind::state);
  CHECK(evaluate(u, "0") == Complex(1.0));
  CHECK(evaluate(u, "0000000") == Complex(1.0));
}

TEST_CASE("ends-in-two-equal-symbols DFA against a regex oracle") {
  auto dfa = models::ends_in_two_dfa();
  CHECK(evaluate(dfa, "100") == Complex(1.0));
  CHECK(evaluate(dfa, "10") == Complex(0.0));
  CHECK(evaluate(dfa, "0011") == Complex(1.0));

  std::regex accepted(".*(00|11)$");
  for (std::size_t n = 1; n <= 8; ++n)
    for (const Word& w : oracle::all_words(dfa.alphabet, n)) {
      std::string text;
      for (const auto& s : w) text += s;
      Complex want(std::regex_match(text, accepted) ? 1.0 : 0.0);
      CHECK(evaluate(dfa, std::span<const std::string>(w)) == want);
    }
}

TEST_CASE("evaluate equals the naive matrix-chain product") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto a = random_automaton(4, seed);
    for (std::size_t n = 1; n <= 5; ++n)
      for (const Word& w : oracle::all_words(a.alphabet, n)) {
        Complex got = evaluate(a, std::span<const std::string>(w));
        Complex want = naive_evaluate(a, w);
        CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
      }
  }
}

TEST_CASE("periodic evaluation is a trace") {
  auto u = models::unit_automaton(SymbolKind::state);
  CHECK(evaluate_periodic(u, "0000") == Complex(1.0));

  auto w = models::w_state_automaton();
  // Explicit 2x2 product oracle for the all-0 word.
  Matrix m = Matrix::Identity(2, 2);
  for (int k = 0; k < 4; ++k) m = m * w.weight("0");
  CHECK(evaluate_periodic(w, "0000") == m.trace());
}

TEST_CASE("periodic evaluation is cyclic-shift invariant") {
  auto nb = models::neighbor_state_automaton();
  CHECK(std::abs(evaluate_periodic(nb, "1100") -
                 evaluate_periodic(nb, "0011")) <= 1e-12);
  for (std::uint64_t seed : {5u, 6u}) {
    auto a = random_automaton(3, seed);
    for (const Word& w : oracle::all_words(a.alphabet, 5)) {
      Word rotated(w.begin() + 1, w.end());
      rotated.push_back(w.front());
      CHECK(std::abs(evaluate_periodic(a, std::span<const std::string>(w)) -
                     evaluate_periodic(
                         a, std::span<const std::string>(rotated))) <= 1e-12);
    }
  }
}

TEST_CASE("sum adds outputs pointwise") {
  auto w = models::w_state_automaton();
  auto cat = models::cat_state_automaton();
  auto both = sum(w, cat);
  CHECK(both.num_states() == 4);
  for (std::size_t n = 1; n <= 8; ++n)
    for (const Word& word : oracle::all_words(w.alphabet, n))
      CHECK(std::abs(evaluate(both, std::span<const std::string>(word)) -
                     evaluate(w, std::span<const std::string>(word)) -
                     evaluate(cat, std::span<const std::string>(word))) <=
            1e-12);

  auto field = models::field_z_automaton();
  auto coupling = models::neighbor_xx_automaton();
  CHECK_THROWS_AS(sum(field, coupling), CompositionError);
}

TEST_CASE("operator-pattern sum matches per-word enumeration") {
  // Align the coupling and field automata on a shared alphabet first.
  auto coupling = models::neighbor_xx_automaton();
  auto field = models::field_z_automaton();
  auto pad = [](WeightedAutomaton a) {
    const auto q = static_cast<Eigen::Index>(a.num_states());
    for (const char* name : {"I", "X", "X2", "Z"})
      if (!a.weights.count(name)) {
        a.alphabet.push_back(name);
        a.weights.emplace(name, Matrix::Zero(q, q));
      }
    std::sort(a.alphabet.begin(), a.alphabet.end());
    return a;
  };
  auto a = pad(coupling), b = pad(field);
  auto s = sum(a, b);
  CHECK(s.num_states() == a.num_states() + b.num_states());
  for (const Word& w : oracle::all_words(s.alphabet, 4)) {
    Complex want = naive_evaluate(a, w) + naive_evaluate(b, w);
    CHECK(std::abs(evaluate(s, std::span<const std::string>(w)) - want) <=
          1e-12);
  }
}

TEST_CASE("scale multiplies every output") {
  auto w = models::w_state_automaton();
  CHECK(evaluate(scale(w, Complex(1.0)), "0100") == Complex(1.0));
  CHECK(evaluate(scale(w, Complex(0.0)), "0100") == Complex(0.0));
  CHECK(evaluate(scale(w, Complex(-2.0)), "0100") == Complex(-2.0));
  for (const Word& word : oracle::all_words(w.alphabet, 8)) {
    Complex c(0.3, 1.5);
    CHECK(std::abs(evaluate(scale(w, c), std::span<const std::string>(word)) -
                   c * evaluate(w, std::span<const std::string>(word))) <=
          1e-12);
  }
}

TEST_CASE("determinism check") {
  CHECK(is_deterministic(models::ends_in_two_dfa()));
  CHECK(is_deterministic(models::unit_automaton(SymbolKind::state)));
  CHECK_FALSE(is_deterministic(models::w_state_automaton()));
  CHECK_FALSE(is_deterministic(models::cat_state_automaton()));
}

TEST_CASE("deterministic automata output only 0 or 1") {
  auto dfa = models::ends_in_two_dfa();
  REQUIRE(is_deterministic(dfa));
  for (std::size_t n = 1; n <= 8; ++n)
    for (const Word& w : oracle::all_words(dfa.alphabet, n)) {
      Complex v = evaluate(dfa, std::span<const std::string>(w));
      CHECK((v == Complex(0.0) || v == Complex(1.0)));
    }
}

TEST_CASE("dot export counts nodes and edges") {
  auto count = [](const std::string& text, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
      ++n;
    return n;
  };

  auto u = models::unit_automaton(SymbolKind::state);
  std::string udot = to_dot(u);
  CHECK(count(udot, "circle") == 1);  // one node statement

  auto w = models::w_state_automaton();
  std::string wdot = to_dot(w);
  CHECK(count(wdot, "circle") == 2);
  CHECK(count(wdot, "->") == 4);  // three weight edges plus the start mark
  CHECK(wdot.find("label=\"0/1\"") != std::string::npos);
}
