#include "automps/specfile.hpp"

#include <map>
#include <sstream>

#include "automps/complex_format.hpp"
#include "automps/errors.hpp"

namespace automps {

namespace {

struct Token {
  std::string text;
  int line;
  int column;
};

std::vector<std::vector<Token>> tokenize(const std::string& text) {
  std::vector<std::vector<Token>> lines;
  std::istringstream is(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(is, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      std::size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i])))
        ++i;
      toks.push_back(Token{raw.substr(start, i - start), lineno,
                           static_cast<int>(start) + 1});
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  return lines;
}

Complex parse_weight(const Token& t) {
  Complex z;
  if (!parse_complex(t.text, z))
    throw SpecError("malformed complex literal '" + t.text + "'", t.line,
                    t.column);
  return z;
}

[[noreturn]] void fail(const std::string& what, const Token& t) {
  throw SpecError(what, t.line, t.column);
}

struct SpecBuilder {
  std::string kind;
  std::size_t dim = 2;  // spin-1/2 by default
  bool dim_seen = false;

  std::vector<std::pair<std::string, std::vector<Complex>>> symbol_defs;
  std::vector<Token> symbol_tokens;
  std::vector<std::string> names;  // states or signals, in order
  std::map<std::string, std::size_t> name_index;

  std::vector<std::tuple<Token, Token, Token, Complex>> edges;  // from,to,sym,w
  std::vector<std::tuple<Token, Token, Token, Token, Token, Complex>> trans;
  std::vector<std::pair<Token, Complex>> initial_entries;
  std::vector<std::pair<Token, Complex>> final_entries;

  std::size_t index_of(const Token& t) const {
    auto it = name_index.find(t.text);
    if (it == name_index.end()) fail("undefined name '" + t.text + "'", t);
    return it->second;
  }
};

SymbolTable build_symbols(const SpecBuilder& b) {
  SymbolTable table(b.kind == "state" ? SymbolKind::state : SymbolKind::op,
                    b.dim);
  for (std::size_t i = 0; i < b.symbol_defs.size(); ++i) {
    const auto& [name, values] = b.symbol_defs[i];
    const Token& tok = b.symbol_tokens[i];
    if (table.contains(name)) fail("duplicate definition of '" + name + "'", tok);
    if (b.kind == "state") {
      if (values.size() != b.dim)
        fail("ket for '" + name + "' must have dim entries", tok);
      Vector v(static_cast<Eigen::Index>(b.dim));
      for (std::size_t k = 0; k < b.dim; ++k)
        v(static_cast<Eigen::Index>(k)) = values[k];
      table.add_ket(name, v);
    } else {
      if (values.size() != b.dim * b.dim)
        fail("matrix for '" + name + "' must have dim x dim entries", tok);
      Matrix m(static_cast<Eigen::Index>(b.dim),
               static_cast<Eigen::Index>(b.dim));
      for (std::size_t r = 0; r < b.dim; ++r)
        for (std::size_t c = 0; c < b.dim; ++c)
          m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              values[r * b.dim + c];
      table.add_matrix(name, m);
    }
  }
  return table;
}

WeightedAutomaton build_automaton(const SpecBuilder& b) {
  if (b.names.empty())
    throw SpecError("automaton needs at least one state", 1, 1);
  SymbolTable table = build_symbols(b);
  const auto q = static_cast<Eigen::Index>(b.names.size());

  WeightedAutomaton a{.states = b.names,
                      .alphabet = {},
                      .weights = {},
                      .initial = RowVector::Zero(q),
                      .final = Vector::Zero(q),
                      .symbols = table};
  for (const auto& [from, to, sym, w] : b.edges) {
    if (!table.contains(sym.text))
      fail("undefined name '" + sym.text + "'", sym);
    std::size_t fi = b.index_of(from), ti = b.index_of(to);
    if (a.weights.find(sym.text) == a.weights.end()) {
      a.alphabet.push_back(sym.text);
      a.weights.emplace(sym.text, Matrix::Zero(q, q));
    }
    a.weights[sym.text](static_cast<Eigen::Index>(fi),
                        static_cast<Eigen::Index>(ti)) += w;
  }
  for (const auto& [tok, w] : b.initial_entries)
    a.initial(static_cast<Eigen::Index>(b.index_of(tok))) += w;
  for (const auto& [tok, w] : b.final_entries)
    a.final(static_cast<Eigen::Index>(b.index_of(tok))) += w;
  a.validate();
  return a;
}

SignalingAgent build_agent(const SpecBuilder& b) {
  if (b.names.empty()) throw SpecError("agent needs at least one signal", 1, 1);
  SymbolTable table = build_symbols(b);
  SignalingAgent a{.signal_names = b.names,
                   .transitions = {},
                   .symbols = table,
                   .initial_signal = 0,
                   .final_signals = {}};
  for (const auto& [up, left, sym, right, down, w] : b.trans) {
    if (!table.contains(sym.text))
      fail("undefined name '" + sym.text + "'", sym);
    a.transitions.push_back(AgentTransition{b.index_of(up), b.index_of(left),
                                            sym.text, b.index_of(right),
                                            b.index_of(down), w});
  }
  if (b.initial_entries.size() != 1)
    throw SpecError("agent needs exactly one initial signal", 1, 1);
  a.initial_signal = b.index_of(b.initial_entries.front().first);
  for (const auto& [tok, w] : b.final_entries) {
    (void)w;
    a.final_signals.push_back(b.index_of(tok));
  }
  a.validate();
  return a;
}

}  // namespace

ParsedSpec parse_spec(const std::string& text) {
  SpecBuilder b;
  auto lines = tokenize(text);
  if (lines.empty()) throw SpecError("empty spec", 1, 1);

  for (const auto& toks : lines) {
    const Token& head = toks[0];
    auto need = [&](std::size_t count) {
      if (toks.size() < count)
        fail("truncated '" + head.text + "' line", head);
    };
    if (head.text == "kind:") {
      need(2);
      if (!b.kind.empty()) fail("duplicate definition of kind", head);
      b.kind = toks[1].text;
      if (b.kind != "state" && b.kind != "operator" && b.kind != "agent")
        fail("kind must be state, operator or agent", toks[1]);
    } else if (head.text == "dim:") {
      need(2);
      if (b.dim_seen) fail("duplicate definition of dim", head);
      try {
        b.dim = std::stoul(toks[1].text);
      } catch (...) {
        fail("malformed dimension", toks[1]);
      }
      if (b.dim < 1) fail("dim must be >= 1", toks[1]);
      b.dim_seen = true;
    } else if (head.text == "symbol") {
      need(3);
      const std::string& mode = toks[2].text;
      if (mode != "ket" && mode != "matrix")
        fail("symbol line needs 'ket' or 'matrix'", toks[2]);
      std::vector<Complex> values;
      for (std::size_t i = 3; i < toks.size(); ++i) {
        if (toks[i].text == ";") continue;  // row separator, cosmetic
        values.push_back(parse_weight(toks[i]));
      }
      b.symbol_defs.emplace_back(toks[1].text, std::move(values));
      b.symbol_tokens.push_back(toks[1]);
    } else if (head.text == "state" || head.text == "signal") {
      need(2);
      if (b.name_index.count(toks[1].text))
        fail("duplicate definition of '" + toks[1].text + "'", toks[1]);
      b.name_index.emplace(toks[1].text, b.names.size());
      b.names.push_back(toks[1].text);
    } else if (head.text == "initial" || head.text == "final") {
      need(2);
      Complex w(1.0);
      if (toks.size() >= 3) w = parse_weight(toks[2]);
      if (head.text == "initial")
        b.initial_entries.emplace_back(toks[1], w);
      else
        b.final_entries.emplace_back(toks[1], w);
    } else if (head.text == "edge") {
      need(4);
      Complex w(1.0);
      if (toks.size() >= 5) w = parse_weight(toks[4]);
      b.edges.emplace_back(toks[1], toks[2], toks[3], w);
    } else if (head.text == "trans") {
      need(6);
      Complex w(1.0);
      if (toks.size() >= 7) w = parse_weight(toks[6]);
      b.trans.emplace_back(toks[1], toks[2], toks[3], toks[4], toks[5], w);
    } else {
      fail("unrecognized directive '" + head.text + "'", head);
    }
  }

  if (b.kind.empty()) throw SpecError("missing 'kind:' line", 1, 1);
  if (b.kind == "agent") return build_agent(b);
  return build_automaton(b);
}

WeightedAutomaton parse_automaton_spec(const std::string& text) {
  ParsedSpec p = parse_spec(text);
  if (auto* a = std::get_if<WeightedAutomaton>(&p)) return std::move(*a);
  throw SpecError("expected a state or operator spec, got an agent", 1, 1);
}

SignalingAgent parse_agent_spec(const std::string& text) {
  ParsedSpec p = parse_spec(text);
  if (auto* a = std::get_if<SignalingAgent>(&p)) return std::move(*a);
  throw SpecError("expected an agent spec, got an automaton", 1, 1);
}

namespace {

void write_symbols(std::ostringstream& os, const SymbolTable& t) {
  for (const auto& name : t.names()) {
    if (t.kind() == SymbolKind::state) {
      os << "symbol " << name << " ket";
      const Vector& v = t.ket(name);
      for (Eigen::Index i = 0; i < v.size(); ++i)
        os << " " << format_complex(v(i));
    } else {
      os << "symbol " << name << " matrix";
      const Matrix& m = t.matrix(name);
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        if (r > 0) os << " ;";
        for (Eigen::Index c = 0; c < m.cols(); ++c)
          os << " " << format_complex(m(r, c));
      }
    }
    os << "\n";
  }
}

}  // namespace

std::string to_spec_text(const WeightedAutomaton& a) {
  std::ostringstream os;
  os << "kind: "
     << (a.symbols.kind() == SymbolKind::state ? "state" : "operator") << "\n";
  os << "dim: " << a.symbols.dim() << "\n";
  write_symbols(os, a.symbols);
  for (const auto& s : a.states) os << "state " << s << "\n";
  for (Eigen::Index i = 0; i < a.initial.size(); ++i)
    if (a.initial(i) != Complex(0.0))
      os << "initial " << a.states[static_cast<std::size_t>(i)] << " "
         << format_complex(a.initial(i)) << "\n";
  for (Eigen::Index i = 0; i < a.final.size(); ++i)
    if (a.final(i) != Complex(0.0))
      os << "final " << a.states[static_cast<std::size_t>(i)] << " "
         << format_complex(a.final(i)) << "\n";
  for (const auto& sym : a.alphabet) {
    const Matrix& w = a.weight(sym);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        if (w(r, c) != Complex(0.0))
          os << "edge " << a.states[static_cast<std::size_t>(r)] << " "
             << a.states[static_cast<std::size_t>(c)] << " " << sym << " "
             << format_complex(w(r, c)) << "\n";
  }
  return os.str();
}

std::string to_spec_text(const SignalingAgent& a) {
  std::ostringstream os;
  os << "kind: agent\n";
  os << "dim: " << a.symbols.dim() << "\n";
  write_symbols(os, a.symbols);
  for (const auto& s : a.signal_names) os << "signal " << s << "\n";
  os << "initial " << a.signal_names[a.initial_signal] << "\n";
  for (auto f : a.final_signals)
    os << "final " << a.signal_names[f] << "\n";
  for (const auto& t : a.transitions)
    os << "trans " << a.signal_names[t.up] << " " << a.signal_names[t.left]
       << " " << t.symbol << " " << a.signal_names[t.right] << " "
       << a.signal_names[t.down] << " " << format_complex(t.weight) << "\n";
  return os.str();
}

}  // namespace automps
