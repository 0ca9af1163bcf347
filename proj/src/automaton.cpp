#include "automps/automaton.hpp"

#include <algorithm>
#include <sstream>

#include "automps/complex_format.hpp"
#include "automps/errors.hpp"

namespace automps {

SymbolTable::SymbolTable(SymbolKind kind, std::size_t dim)
    : kind_(kind), dim_(dim) {
  if (dim == 0) throw DimensionError("symbol table: dimension must be >= 1");
}

void SymbolTable::add_ket(const std::string& name, Vector ket) {
  if (kind_ != SymbolKind::state)
    throw SymbolError("symbol table: kets belong to state tables");
  if (contains(name)) throw SymbolError("symbol '" + name + "' already defined");
  if (static_cast<std::size_t>(ket.size()) != dim_)
    throw DimensionError("symbol '" + name + "': ket length != dim");
  names_.push_back(name);
  kets_.emplace(name, std::move(ket));
}

void SymbolTable::add_matrix(const std::string& name, Matrix m) {
  if (kind_ != SymbolKind::op)
    throw SymbolError("symbol table: matrices belong to operator tables");
  if (contains(name)) throw SymbolError("symbol '" + name + "' already defined");
  if (static_cast<std::size_t>(m.rows()) != dim_ ||
      static_cast<std::size_t>(m.cols()) != dim_)
    throw DimensionError("symbol '" + name + "': matrix is not dim x dim");
  names_.push_back(name);
  matrices_.emplace(name, std::move(m));
}

bool SymbolTable::contains(const std::string& name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const Vector& SymbolTable::ket(const std::string& name) const {
  auto it = kets_.find(name);
  if (it == kets_.end()) throw SymbolError("unknown symbol '" + name + "'");
  return it->second;
}

const Matrix& SymbolTable::matrix(const std::string& name) const {
  auto it = matrices_.find(name);
  if (it == matrices_.end()) throw SymbolError("unknown symbol '" + name + "'");
  return it->second;
}

bool SymbolTable::operator==(const SymbolTable& other) const {
  if (kind_ != other.kind_ || dim_ != other.dim_ || names_ != other.names_)
    return false;
  for (const auto& n : names_) {
    if (kind_ == SymbolKind::state) {
      if (ket(n) != other.ket(n)) return false;
    } else {
      if (matrix(n) != other.matrix(n)) return false;
    }
  }
  return true;
}

const Matrix& WeightedAutomaton::weight(const std::string& symbol) const {
  auto it = weights.find(symbol);
  if (it == weights.end())
    throw SymbolError("unknown symbol '" + symbol + "'");
  return it->second;
}

void WeightedAutomaton::validate() const {
  if (states.empty()) throw PreconditionError("automaton: no states");
  const auto q = static_cast<Eigen::Index>(states.size());
  if (initial.size() != q || final.size() != q)
    throw DimensionError("automaton: boundary distributions have wrong size");
  for (const auto& a : alphabet) {
    const Matrix& w = weight(a);
    if (w.rows() != q || w.cols() != q)
      throw DimensionError("automaton: weight matrix for '" + a +
                           "' is not |Q| x |Q|");
    if (!symbols.contains(a))
      throw SymbolError("automaton: symbol '" + a + "' has no realization");
  }
}

namespace {

Matrix word_product(const WeightedAutomaton& a,
                    std::span<const std::string> word) {
  if (word.empty()) throw PreconditionError("evaluate: empty word");
  Matrix m = a.weight(word[0]);
  for (std::size_t i = 1; i < word.size(); ++i) m = m * a.weight(word[i]);
  return m;
}

}  // namespace

Complex evaluate(const WeightedAutomaton& a,
                 std::span<const std::string> word) {
  if (word.empty()) throw PreconditionError("evaluate: empty word");
  RowVector v = a.initial;
  for (const auto& s : word) v = v * a.weight(s);
  return v * a.final;
}

Complex evaluate_periodic(const WeightedAutomaton& a,
                          std::span<const std::string> word) {
  return word_product(a, word).trace();
}

Word word_from_chars(const WeightedAutomaton& a, const std::string& text) {
  Word w;
  w.reserve(text.size());
  for (char c : text) {
    std::string s(1, c);
    if (std::find(a.alphabet.begin(), a.alphabet.end(), s) == a.alphabet.end())
      throw SymbolError("unknown symbol '" + s + "'");
    w.push_back(std::move(s));
  }
  return w;
}

Complex evaluate(const WeightedAutomaton& a, const std::string& word_chars) {
  return evaluate(a, std::span<const std::string>(word_from_chars(a, word_chars)));
}

Complex evaluate_periodic(const WeightedAutomaton& a,
                          const std::string& word_chars) {
  return evaluate_periodic(
      a, std::span<const std::string>(word_from_chars(a, word_chars)));
}

WeightedAutomaton sum(const WeightedAutomaton& a, const WeightedAutomaton& b) {
  if (a.alphabet != b.alphabet || !(a.symbols == b.symbols))
    throw CompositionError("sum: alphabets or symbol tables differ");
  const auto qa = static_cast<Eigen::Index>(a.num_states());
  const auto qb = static_cast<Eigen::Index>(b.num_states());

  WeightedAutomaton out{.states = {},
                        .alphabet = a.alphabet,
                        .weights = {},
                        .initial = RowVector(qa + qb),
                        .final = Vector(qa + qb),
                        .symbols = a.symbols};
  for (const auto& s : a.states) out.states.push_back("a." + s);
  for (const auto& s : b.states) out.states.push_back("b." + s);
  for (const auto& sym : a.alphabet) {
    Matrix w = Matrix::Zero(qa + qb, qa + qb);
    w.topLeftCorner(qa, qa) = a.weight(sym);
    w.bottomRightCorner(qb, qb) = b.weight(sym);
    out.weights.emplace(sym, std::move(w));
  }
  out.initial << a.initial, b.initial;
  out.final << a.final, b.final;
  return out;
}

WeightedAutomaton scale(const WeightedAutomaton& a, Complex c) {
  WeightedAutomaton out = a;
  out.initial = a.initial * c;
  return out;
}

namespace {

bool zero_or_one(Complex v) {
  return v == Complex(0.0) || v == Complex(1.0);
}

bool one_hot_row(const RowVector& row) {
  int nonzero = 0;
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    if (!zero_or_one(row(i))) return false;
    if (row(i) != Complex(0.0)) ++nonzero;
  }
  return nonzero == 1;
}

}  // namespace

bool is_deterministic(const WeightedAutomaton& a) {
  if (!one_hot_row(a.initial)) return false;
  for (Eigen::Index i = 0; i < a.final.size(); ++i)
    if (!zero_or_one(a.final(i))) return false;
  for (const auto& sym : a.alphabet) {
    const Matrix& w = a.weight(sym);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      if (!one_hot_row(w.row(r))) return false;
  }
  return true;
}

std::string to_dot(const WeightedAutomaton& a) {
  std::ostringstream os;
  os << "digraph automaton {\n";
  os << "  rankdir=LR;\n";
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    bool accepting = a.final(static_cast<Eigen::Index>(i)) != Complex(0.0);
    os << "  q" << i << " [label=\"" << a.states[i] << "\", shape="
       << (accepting ? "doublecircle" : "circle") << "];\n";
  }
  bool any_start = a.initial.cwiseAbs().sum() != 0.0;
  if (any_start) os << "  start [shape=point];\n";
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    Complex w = a.initial(static_cast<Eigen::Index>(i));
    if (w == Complex(0.0)) continue;
    os << "  start -> q" << i;
    if (w != Complex(1.0)) os << " [label=\"" << format_complex(w) << "\"]";
    os << ";\n";
  }
  for (const auto& sym : a.alphabet) {
    const Matrix& w = a.weight(sym);
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index c = 0; c < w.cols(); ++c)
        if (w(r, c) != Complex(0.0))
          os << "  q" << r << " -> q" << c << " [label=\"" << sym << "/"
             << format_complex(w(r, c)) << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace automps
