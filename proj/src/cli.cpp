#include "automps/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "automps/complex_format.hpp"
#include "automps/errors.hpp"
#include "automps/models.hpp"
#include "automps/mp_compile.hpp"
#include "automps/oracle.hpp"
#include "automps/specfile.hpp"
#include "automps/variational.hpp"

namespace automps::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// True when every ket is a distinct standard basis vector, so physical
// configurations and words coincide.
bool basis_kets(const SymbolTable& t, std::vector<std::size_t>& index_of) {
  if (t.kind() != SymbolKind::state) return false;
  std::vector<bool> used(t.dim(), false);
  index_of.clear();
  for (const auto& name : t.names()) {
    const Vector& k = t.ket(name);
    Eigen::Index hot = -1;
    for (Eigen::Index i = 0; i < k.size(); ++i) {
      if (k(i) == Complex(0.0)) continue;
      if (k(i) != Complex(1.0) || hot >= 0) return false;
      hot = i;
    }
    if (hot < 0 || used[static_cast<std::size_t>(hot)]) return false;
    used[static_cast<std::size_t>(hot)] = true;
    index_of.push_back(static_cast<std::size_t>(hot));
  }
  return true;
}

int cmd_compile(const std::string& path, std::size_t sites, bool periodic,
                bool dense, bool as_json, std::ostream& out) {
  WeightedAutomaton a = parse_automaton_spec(read_file(path));
  Compiled compiled =
      periodic ? unroll_periodic(a, sites) : unroll(a, sites);

  json j{{"command", "compile"},
         {"inputs",
          {{"spec", path},
           {"sites", sites},
           {"periodic", periodic},
           {"dense", dense}}},
         {"results", json::object()}};

  if (const auto* mps = std::get_if<CompiledMps>(&compiled)) {
    const MatrixProductState& s = mps->state();
    json extents = json::array();
    for (std::size_t k = 0; k <= sites; ++k) extents.push_back(s.bond_extent(k));
    j["results"]["bond_extents"] = extents;
    if (dense) {
      Vector v = oracle::dense_state(s);
      const std::size_t d = s.phys_dim();
      json amp = json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) amp.push_back(complex_json(v(i)));
      j["results"]["amplitudes"] = amp;
      if (!as_json) {
        std::vector<std::size_t> digits(sites, 0);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
          std::size_t rest = static_cast<std::size_t>(i);
          for (std::size_t k = sites; k-- > 0;) {
            digits[k] = rest % d;
            rest /= d;
          }
          for (auto dgt : digits) out << dgt;
          out << " " << format_complex(v(i)) << "\n";
        }
      }
    } else if (!as_json) {
      out << "compiled state: " << sites << " sites, bond extents";
      for (std::size_t k = 0; k <= sites; ++k) out << " " << s.bond_extent(k);
      out << "\n";
    }
  } else {
    const CompiledMpo& mpo = std::get<CompiledMpo>(compiled);
    const MatrixProductOperator& op = mpo.op();
    json extents = json::array();
    for (std::size_t k = 0; k <= sites; ++k) extents.push_back(op.bond_extent(k));
    j["results"]["bond_extents"] = extents;
    if (dense) {
      Matrix m = oracle::dense_operator(op);
      json rows = json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          row.push_back(complex_json(m(r, c)));
        rows.push_back(row);
      }
      j["results"]["dense_matrix"] = rows;
      if (!as_json) {
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
          for (Eigen::Index c = 0; c < m.cols(); ++c)
            out << (c ? " " : "") << format_complex(m(r, c));
          out << "\n";
        }
      }
    } else if (!as_json) {
      out << "compiled operator: " << sites << " sites, bond extents";
      for (std::size_t k = 0; k <= sites; ++k) out << " " << op.bond_extent(k);
      out << "\n";
    }
  }
  if (as_json) out << j.dump(2) << "\n";
  return 0;
}

int cmd_expect(const std::string& op_path, const std::string& state_path,
               std::size_t sites, bool periodic, bool as_json,
               std::ostream& out) {
  WeightedAutomaton oa = parse_automaton_spec(read_file(op_path));
  WeightedAutomaton sa = parse_automaton_spec(read_file(state_path));
  CompiledMpo mpo =
      periodic ? unroll_periodic_mpo(oa, sites) : unroll_mpo(oa, sites);
  CompiledMps mps =
      periodic ? unroll_periodic_mps(sa, sites) : unroll_mps(sa, sites);

  Complex value = expectation(mps.state(), mpo.op(), mps.state());
  Complex norm = inner(mps.state(), mps.state());

  if (as_json) {
    json j{{"command", "expect"},
           {"inputs",
            {{"operator", op_path},
             {"state", state_path},
             {"sites", sites},
             {"periodic", periodic}}},
           {"results",
            {{"expectation", complex_json(value)},
             {"norm", complex_json(norm)}}}};
    if (norm != Complex(0.0))
      j["results"]["normalized"] = complex_json(value / norm);
    out << j.dump(2) << "\n";
  } else {
    out << "expectation " << format_complex(value) << "\n";
    out << "norm " << format_complex(norm) << "\n";
    if (norm != Complex(0.0))
      out << "normalized " << format_complex(value / norm) << "\n";
  }
  return 0;
}

int cmd_dmrg(const std::string& path, std::size_t sites, std::size_t bond,
             std::size_t sweeps, double tol, std::uint64_t seed, bool verify,
             bool as_json, std::ostream& out) {
  WeightedAutomaton a = parse_automaton_spec(read_file(path));
  CompiledMpo h = unroll_mpo(a, sites);
  MatrixProductState s0 =
      MatrixProductState::random(sites, a.symbols.dim(), bond, seed);

  SweepOptions opts;
  opts.verify_hermitian = verify && sites <= 10;
  SweepResult result = sweep(h.op(), s0, sweeps, tol, opts);

  json j{{"command", "dmrg"},
         {"inputs",
          {{"spec", path},
           {"sites", sites},
           {"bond", bond},
           {"sweeps", sweeps},
           {"tol", tol},
           {"seed", seed}}},
         {"results", json::object()}};
  j["results"]["energies"] = result.report.sweep_energies;
  j["results"]["global_energies"] = result.report.global_energies;
  j["results"]["converged"] = result.report.converged;
  if (!as_json) {
    for (std::size_t i = 0; i < result.report.sweep_energies.size(); ++i)
      out << "sweep " << (i + 1) << " energy "
          << format_real(result.report.sweep_energies[i]) << "\n";
    out << "converged " << (result.report.converged ? "yes" : "no") << "\n";
  }
  for (const auto& w : result.report.warnings) out << "warning: " << w << "\n";

  if (verify) {
    Matrix dense = oracle::dense_operator(h.op());
    oracle::GroundState gs = oracle::exact_ground(dense);
    double final_energy = result.report.sweep_energies.back();
    double diff = std::abs(final_energy - gs.energy);
    j["results"]["exact_energy"] = gs.energy;
    j["results"]["abs_diff"] = diff;
    if (!as_json) {
      out << "exact energy " << format_real(gs.energy) << "\n";
      out << "difference " << format_real(diff) << "\n";
    }
  }
  if (as_json) out << j.dump(2) << "\n";
  return 0;
}

int cmd_verify(const std::string& path, std::size_t sites, bool periodic,
               bool as_json, std::ostream& out) {
  WeightedAutomaton a = parse_automaton_spec(read_file(path));
  double words = std::pow(static_cast<double>(a.alphabet.size()),
                          static_cast<double>(sites));
  if (words > static_cast<double>(1 << 20))
    throw SizeError("verify: word enumeration exceeds 2^20");

  Compiled compiled =
      periodic ? unroll_periodic(a, sites) : unroll(a, sites);

  double max_err = 0.0;
  std::size_t checked = 0;
  for (const Word& w : oracle::all_words(a.alphabet, sites)) {
    Complex want = periodic
                       ? evaluate_periodic(a, std::span<const std::string>(w))
                       : evaluate(a, std::span<const std::string>(w));
    Complex got = std::visit(
        [&](const auto& c) { return c.word_weight(std::span<const std::string>(w)); },
        compiled);
    max_err = std::max(max_err, std::abs(want - got));
    ++checked;
  }

  // With standard basis kets the physical amplitudes are the word weights.
  double amp_err = 0.0;
  bool amp_checked = false;
  std::vector<std::size_t> ket_index;
  if (const auto* mps = std::get_if<CompiledMps>(&compiled);
      mps && basis_kets(a.symbols, ket_index)) {
    amp_checked = true;
    for (const Word& w : oracle::all_words(a.alphabet, sites)) {
      Complex want = periodic
                         ? evaluate_periodic(a, std::span<const std::string>(w))
                         : evaluate(a, std::span<const std::string>(w));
      std::vector<std::size_t> config;
      for (const auto& sym : w) {
        std::size_t pos = 0;
        for (; pos < a.symbols.names().size(); ++pos)
          if (a.symbols.names()[pos] == sym) break;
        config.push_back(ket_index[pos]);
      }
      Complex got = amplitude(mps->state(), std::span<const std::size_t>(config));
      amp_err = std::max(amp_err, std::abs(want - got));
    }
  }

  bool ok = max_err <= 1e-12 && amp_err <= 1e-12;
  if (as_json) {
    json j{{"command", "verify"},
           {"inputs", {{"spec", path}, {"sites", sites}, {"periodic", periodic}}},
           {"results",
            {{"words", checked},
             {"max_word_error", max_err},
             {"amplitudes_checked", amp_checked},
             {"max_amplitude_error", amp_err},
             {"ok", ok}}}};
    out << j.dump(2) << "\n";
  } else {
    out << (ok ? "ok" : "FAILED") << ": " << checked
        << " words matched to 1e-12 (max error " << format_real(max_err);
    if (amp_checked)
      out << ", max amplitude error " << format_real(amp_err);
    out << ")\n";
  }
  return ok ? 0 : 1;
}

SymbolGrid parse_config(const GridOperator& g, const std::string& text) {
  SymbolGrid config;
  std::istringstream rows(text);
  std::string row;
  bool multi = false;
  for (const auto& n : g.agent().symbols.names()) multi = multi || n.size() > 1;
  while (std::getline(rows, row, ';')) {
    std::vector<std::string> cells;
    if (row.find(',') != std::string::npos || multi) {
      std::istringstream cs(row);
      std::string cell;
      while (std::getline(cs, cell, ',')) cells.push_back(cell);
    } else {
      for (char c : row)
        if (!std::isspace(static_cast<unsigned char>(c)))
          cells.emplace_back(1, c);
    }
    config.push_back(std::move(cells));
  }
  return config;
}

int cmd_grid(const std::string& path, std::size_t rows, std::size_t cols,
             bool enumerate, const std::string& config_text, bool as_json,
             std::ostream& out) {
  SignalingAgent agent = parse_agent_spec(read_file(path));
  GridOperator g = compile_grid(agent, rows, cols);

  json j{{"command", "grid"},
         {"inputs",
          {{"spec", path},
           {"rows", rows},
           {"cols", cols},
           {"enumerate", enumerate}}},
         {"results", json::object()}};

  if (!config_text.empty()) {
    SymbolGrid config = parse_config(g, config_text);
    Complex w = grid_weight(g, config);
    j["inputs"]["config"] = config_text;
    j["results"]["weight"] = complex_json(w);
    if (!as_json) out << "weight " << format_complex(w) << "\n";
    if (as_json) out << j.dump(2) << "\n";
    return 0;
  }

  if (enumerate) {
    auto accepted = enumerate_grid(g);
    // The uniform background configuration is reported separately from the
    // pattern placements.
    const std::string& background = agent.symbols.names().front();
    json configs = json::array();
    std::size_t shown = 0;
    Complex background_weight(0.0);
    bool has_background = false;
    for (const auto& [config, weight] : accepted) {
      bool is_background = true;
      for (const auto& row : config)
        for (const auto& cell : row) is_background &= cell == background;
      if (is_background) {
        has_background = true;
        background_weight = weight;
        continue;
      }
      ++shown;
      json rows_json = json::array();
      if (!as_json) out << "config " << shown << " (weight "
                        << format_complex(weight) << ")\n";
      for (const auto& row : config) {
        std::string line;
        for (const auto& cell : row) line += cell;
        rows_json.push_back(line);
        if (!as_json) out << "  " << line << "\n";
      }
      configs.push_back({{"cells", rows_json}, {"weight", complex_json(weight)}});
    }
    j["results"]["configurations"] = configs;
    j["results"]["accepted"] = shown;
    if (has_background) {
      j["results"]["background_weight"] = complex_json(background_weight);
      if (!as_json)
        out << "background (all " << background << ") weight "
            << format_complex(background_weight) << "\n";
    }
    if (!as_json) out << shown << " accepted configurations\n";
    if (as_json) out << j.dump(2) << "\n";
    return 0;
  }

  if (!as_json)
    out << "grid " << rows << "x" << cols << " with "
        << agent.num_signals() << " signals\n";
  if (as_json) out << j.dump(2) << "\n";
  return 0;
}

int cmd_dot(const std::string& path, std::ostream& out) {
  ParsedSpec spec = parse_spec(read_file(path));
  if (auto* a = std::get_if<WeightedAutomaton>(&spec)) {
    out << to_dot(*a);
    return 0;
  }
  throw Error("dot: agent specs have no automaton diagram");
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"weighted-automaton to matrix-product compiler"};
  app.require_subcommand(1);

  std::string spec_path, state_path, config_text;
  std::size_t sites = 4, rows = 2, cols = 2, bond = 8, sweeps = 20;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  bool periodic = false, dense = false, as_json = false, verify = false,
       enumerate = false;

  auto* compile = app.add_subcommand("compile", "compile a spec to a chain");
  compile->add_option("spec", spec_path)->required();
  compile->add_option("--sites", sites)->required();
  compile->add_flag("--periodic", periodic);
  compile->add_flag("--dense", dense);
  compile->add_flag("--json", as_json);

  auto* expect = app.add_subcommand("expect", "expectation value of an operator");
  expect->add_option("operator", spec_path)->required();
  expect->add_option("state", state_path)->required();
  expect->add_option("--sites", sites)->required();
  expect->add_flag("--periodic", periodic);
  expect->add_flag("--json", as_json);

  auto* dmrg = app.add_subcommand("dmrg", "variational ground-state search");
  dmrg->add_option("spec", spec_path)->required();
  dmrg->add_option("--sites", sites)->required();
  dmrg->add_option("--bond", bond);
  dmrg->add_option("--sweeps", sweeps);
  dmrg->add_option("--tol", tol);
  dmrg->add_option("--seed", seed);
  dmrg->add_flag("--verify", verify);
  dmrg->add_flag("--json", as_json);

  auto* verify_cmd = app.add_subcommand("verify", "check a compiled chain against the automaton");
  verify_cmd->add_option("spec", spec_path)->required();
  verify_cmd->add_option("--sites", sites)->required();
  verify_cmd->add_flag("--periodic", periodic);
  verify_cmd->add_flag("--json", as_json);

  auto* grid = app.add_subcommand("grid", "compile and evaluate a 2D agent");
  grid->add_option("spec", spec_path)->required();
  grid->add_option("--rows", rows)->required();
  grid->add_option("--cols", cols)->required();
  grid->add_flag("--enumerate", enumerate);
  grid->add_option("--config", config_text);
  grid->add_flag("--json", as_json);

  auto* dot = app.add_subcommand("dot", "GraphViz rendering of an automaton");
  dot->add_option("spec", spec_path)->required();

  std::vector<const char*> cargs;
  cargs.push_back("automps");
  for (const auto& a : argv) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()),
              const_cast<char**>(cargs.data()));
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help and friends.
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  try {
    if (compile->parsed())
      return cmd_compile(spec_path, sites, periodic, dense, as_json, out);
    if (expect->parsed())
      return cmd_expect(spec_path, state_path, sites, periodic, as_json, out);
    if (dmrg->parsed())
      return cmd_dmrg(spec_path, sites, bond, sweeps, tol, seed, verify,
                      as_json, out);
    if (verify_cmd->parsed())
      return cmd_verify(spec_path, sites, periodic, as_json, out);
    if (grid->parsed())
      return cmd_grid(spec_path, rows, cols, enumerate, config_text, as_json,
                      out);
    if (dot->parsed()) return cmd_dot(spec_path, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand\n";
  return 2;
}

}  // namespace automps::cli
