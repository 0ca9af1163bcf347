#include <fstream>
#include <sstream>

#include "automps/models.hpp"
#include "automps/mp_compile.hpp"
#include "automps/oracle.hpp"
#include "automps/specfile.hpp"
#include "doctest.h"
#include "test_helpers.hpp"

using namespace automps;
using namespace automps::testing;

namespace {

std::string read_spec(const std::string& name) {
  std::ifstream in(std::string(AUTOMPS_SPEC_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void check_same_outputs(const WeightedAutomaton& a, const WeightedAutomaton& b,
                        std::size_t max_len) {
  REQUIRE(a.alphabet == b.alphabet);
  for (std::size_t n = 1; n <= max_len; ++n)
    for (const Word& w : oracle::all_words(a.alphabet, n))
      CHECK(std::abs(evaluate(a, std::span<const std::string>(w)) -
                     evaluate(b, std::span<const std::string>(w))) <= 1e-12);
}

}  // namespace

TEST_CASE("shipped state specs match the built-in models") {
  check_same_outputs(parse_automaton_spec(read_spec("w.wfa")),
                     models::w_state_automaton(), 7);
  check_same_outputs(parse_automaton_spec(read_spec("cat.wfa")),
                     models::cat_state_automaton(), 7);
  check_same_outputs(parse_automaton_spec(read_spec("ends_in_two.wfa")),
                     models::ends_in_two_dfa(), 7);
}

TEST_CASE("shipped operator specs compile to the expected dense forms") {
  auto field = parse_automaton_spec(read_spec("field_z.wfa"));
  CHECK((oracle::dense_operator(unroll_mpo(field, 4).op()) -
         oracle::dense_operator(
             unroll_mpo(models::field_z_automaton(), 4).op()))
            .norm() <= 1e-12);

  auto coupling = parse_automaton_spec(read_spec("neighbor_xx.wfa"));
  CHECK((oracle::dense_operator(unroll_mpo(coupling, 4).op()) -
         oracle::dense_operator(
             unroll_mpo(models::neighbor_xx_automaton(), 4).op()))
            .norm() <= 1e-12);

  auto ising = parse_automaton_spec(read_spec("ising.wfa"));
  CHECK((oracle::dense_operator(unroll_mpo(ising, 6).op()) -
         oracle::dense_operator(
             unroll_mpo(models::ising_automaton(1.0), 6).op()))
            .norm() <= 1e-10);
}

TEST_CASE("shipped agent spec matches the built-in table") {
  auto agent = parse_agent_spec(read_spec("fourx.agent"));
  auto want = four_x_agent();
  CHECK(agent.signal_names == want.signal_names);
  REQUIRE(agent.transitions.size() == want.transitions.size());
  CHECK((dense_grid_operator(compile_grid(agent, 3, 3)) -
         dense_grid_operator(compile_grid(want, 3, 3)))
            .norm() == 0.0);
}
