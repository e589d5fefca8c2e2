#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mllgames {

// ---------------------------------------------------------------------------
// Atoms and occurrence ids

class Atom {
 public:
  explicit Atom(std::string name) : name_(std::move(name)) {
    if (!valid_name(name_)) throw std::invalid_argument("invalid atom name '" + name_ + "'");
  }

  static bool valid_name(std::string_view s) {
    if (s.empty() || !std::islower(static_cast<unsigned char>(s.front()))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
  }

  const std::string& name() const { return name_; }
  auto operator<=>(const Atom&) const = default;

 private:
  std::string name_;
};

// 1-based index of a literal leaf, counted left to right over the whole sequent.
struct OccurrenceId {
  std::size_t value = 0;
  auto operator<=>(const OccurrenceId&) const = default;
};

// ---------------------------------------------------------------------------
// Formulas in negation normal form

class Formula {
 public:
  enum class Kind : unsigned char { Literal, Tensor, Par };

  static Formula literal(Atom atom, bool negated = false) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Literal;
    n->atom = std::move(atom);
    n->negated = negated;
    n->leaves = 1;
    return Formula(std::move(n));
  }
  static Formula literal(std::string name, bool negated = false) {
    return literal(Atom(std::move(name)), negated);
  }
  static Formula tensor(Formula l, Formula r) { return binary(Kind::Tensor, std::move(l), std::move(r)); }
  static Formula par(Formula l, Formula r) { return binary(Kind::Par, std::move(l), std::move(r)); }
  static Formula binary(Kind k, Formula l, Formula r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->leaves = l.literal_count() + r.literal_count();
    n->left = std::move(l.node_);
    n->right = std::move(r.node_);
    return Formula(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  bool is_literal() const { return node_->kind == Kind::Literal; }
  bool is_tensor() const { return node_->kind == Kind::Tensor; }
  bool is_par() const { return node_->kind == Kind::Par; }

  const Atom& atom() const { return *node_->atom; }
  bool negated() const { return node_->negated; }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  std::size_t literal_count() const { return node_->leaves; }

  friend bool operator==(const Formula& a, const Formula& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind() || a.literal_count() != b.literal_count()) return false;
    if (a.is_literal()) return a.atom() == b.atom() && a.negated() == b.negated();
    return a.left() == b.left() && a.right() == b.right();
  }

 private:
  struct Node {
    Kind kind = Kind::Literal;
    std::optional<Atom> atom;
    bool negated = false;
    std::size_t leaves = 0;
    std::shared_ptr<const Node> left, right;
  };

  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

// De Morgan dual, kept in negation normal form.
inline Formula negate(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Literal:
      return Formula::literal(f.atom(), !f.negated());
    case Formula::Kind::Tensor:
      return Formula::par(negate(f.left()), negate(f.right()));
    case Formula::Kind::Par:
      return Formula::tensor(negate(f.left()), negate(f.right()));
  }
  return f;
}

struct Sequent {
  std::vector<Formula> formulas;

  std::size_t literal_count() const {
    std::size_t n = 0;
    for (const auto& f : formulas) n += f.literal_count();
    return n;
  }
  friend bool operator==(const Sequent&, const Sequent&) = default;
};

// ---------------------------------------------------------------------------
// Printing (minimal parentheses, both connectives left-associative)

namespace detail {

inline void print_formula(std::ostream& os, const Formula& f) {
  using K = Formula::Kind;
  if (f.is_literal()) {
    os << f.atom().name() << (f.negated() ? "^" : "");
    return;
  }
  const char* op = f.is_tensor() ? " * " : " | ";
  auto needs_parens = [&](const Formula& child, bool right_side) {
    if (child.is_literal()) return false;
    if (f.kind() == K::Tensor) return child.is_par() || right_side;
    return child.is_par() && right_side;
  };
  const Formula l = f.left(), r = f.right();
  if (needs_parens(l, false)) {
    os << '(';
    print_formula(os, l);
    os << ')';
  } else {
    print_formula(os, l);
  }
  os << op;
  if (needs_parens(r, true)) {
    os << '(';
    print_formula(os, r);
    os << ')';
  } else {
    print_formula(os, r);
  }
}

}  // namespace detail

inline std::string to_string(const Formula& f) {
  std::ostringstream os;
  detail::print_formula(os, f);
  return os.str();
}

inline std::string to_string(const Sequent& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.formulas.size(); ++i) {
    if (i) os << ", ";
    detail::print_formula(os, s.formulas[i]);
  }
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << to_string(f); }
inline std::ostream& operator<<(std::ostream& os, const Sequent& s) { return os << to_string(s); }

// ---------------------------------------------------------------------------
// Parsing

class SyntaxError : public std::runtime_error {
 public:
  // `position` is a byte offset into the input, or npos for end of input.
  SyntaxError(std::size_t position, std::string expected, std::string message)
      : std::runtime_error(std::move(message)), position_(position), expected_(std::move(expected)) {}

  static constexpr std::size_t end_of_input = static_cast<std::size_t>(-1);

  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class NegationOnCompound : public SyntaxError {
 public:
  explicit NegationOnCompound(std::size_t position)
      : SyntaxError(position, "',' or operator",
                    "negation '^' applies to atoms only (offset " + std::to_string(position) + ")") {}
};

inline constexpr std::string_view sequent_grammar =
    "sequent = formula (',' formula)*\n"
    "formula = tensor ('|' tensor)*        (par, left-associative)\n"
    "tensor  = atomic ('*' atomic)*        (tensor, left-associative, binds tighter)\n"
    "atomic  = atom ['^'] | '(' formula ')'\n"
    "atom    = [a-z][A-Za-z0-9_]*";

namespace detail {

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool peek_is(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }
  bool accept(std::string_view tok) {
    if (!peek_is(tok)) return false;
    pos_ += tok.size();
    return true;
  }
  std::size_t pos() {
    skip_ws();
    return pos_;
  }
  std::size_t error_pos() { return at_end() ? SyntaxError::end_of_input : pos_; }

  std::optional<std::string> identifier() {
    skip_ws();
    if (pos_ >= text_.size() || !std::islower(static_cast<unsigned char>(text_[pos_]))) return std::nullopt;
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  [[noreturn]] void fail(const std::string& expected) {
    const auto p = error_pos();
    std::string where = p == SyntaxError::end_of_input ? "end-of-input" : "offset " + std::to_string(p);
    std::string found = p == SyntaxError::end_of_input ? "" : std::string(" near '") + text_[p] + "'";
    throw SyntaxError(p, expected, "syntax error at " + where + found + ": expected " + expected);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

class SequentParser {
 public:
  explicit SequentParser(std::string_view text) : lex_(text) {}

  Sequent sequent() {
    Sequent s;
    s.formulas.push_back(formula());
    while (lex_.accept(",")) s.formulas.push_back(formula());
    if (!lex_.at_end()) lex_.fail("',' or end-of-input");
    return s;
  }

  Formula single() {
    Formula f = formula();
    if (!lex_.at_end()) lex_.fail("end-of-input");
    return f;
  }

 private:
  Formula formula() {
    Formula f = tensor();
    while (lex_.accept("|")) f = Formula::par(f, tensor());
    return f;
  }
  Formula tensor() {
    Formula f = atomic();
    while (lex_.accept("*")) f = Formula::tensor(f, atomic());
    return f;
  }
  Formula atomic() {
    if (lex_.accept("(")) {
      Formula f = formula();
      if (!lex_.accept(")")) lex_.fail("')'");
      if (lex_.peek_is("^")) throw NegationOnCompound(lex_.pos());
      return f;
    }
    auto name = lex_.identifier();
    if (!name) lex_.fail("atomic");
    bool neg = lex_.accept("^");
    if (lex_.peek_is("^")) lex_.fail("',' or operator");
    return Formula::literal(Atom(*name), neg);
  }

  Lexer lex_;
};

}  // namespace detail

inline Sequent parse_sequent(std::string_view text) { return detail::SequentParser(text).sequent(); }
inline Formula parse_formula(std::string_view text) { return detail::SequentParser(text).single(); }

// ---------------------------------------------------------------------------
// Literal occurrences

struct LiteralOccurrence {
  OccurrenceId id;
  Atom atom;
  bool negated;
};

struct OccurrenceIndex {
  std::vector<LiteralOccurrence> occurrences;
  bool balanced = true;

  const LiteralOccurrence& at(OccurrenceId id) const { return occurrences.at(id.value - 1); }
  std::size_t size() const { return occurrences.size(); }
};

namespace detail {
inline void collect_literals(const Formula& f, std::vector<LiteralOccurrence>& out) {
  if (f.is_literal()) {
    out.push_back({OccurrenceId{out.size() + 1}, f.atom(), f.negated()});
    return;
  }
  collect_literals(f.left(), out);
  collect_literals(f.right(), out);
}
}  // namespace detail

inline OccurrenceIndex literal_occurrences(const Sequent& s) {
  OccurrenceIndex idx;
  for (const auto& f : s.formulas) detail::collect_literals(f, idx.occurrences);
  std::map<Atom, long> excess;
  for (const auto& o : idx.occurrences) excess[o.atom] += o.negated ? -1 : 1;
  idx.balanced = std::all_of(excess.begin(), excess.end(), [](const auto& kv) { return kv.second == 0; });
  return idx;
}

inline std::vector<Atom> atoms_of(const Sequent& s) {
  std::vector<Atom> out;
  for (const auto& o : literal_occurrences(s).occurrences)
    if (std::find(out.begin(), out.end(), o.atom) == out.end()) out.push_back(o.atom);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Formation forest: the formula trees of a sequent flattened in pre-order.
// Connectives are numbered per kind (tensor1, tensor2, ..., par1, ...) in the
// same pre-order; leaves carry their occurrence id.

struct FormationNode {
  Formula::Kind kind;
  int left = -1;
  int right = -1;
  int parent = -1;
  std::size_t formula = 0;
  std::size_t number = 0;  // occurrence id for literals, per-kind counter otherwise
};

struct FormationForest {
  std::vector<FormationNode> nodes;
  std::vector<int> roots;
  std::vector<int> leaf_of_occurrence;  // index by occurrence id - 1
  std::vector<int> par_nodes;           // index by par number - 1
  std::size_t tensor_count = 0;

  explicit FormationForest(const Sequent& s) {
    for (std::size_t i = 0; i < s.formulas.size(); ++i) roots.push_back(add(s.formulas[i], -1, i));
  }

  std::string node_name(int n) const {
    const auto& node = nodes[n];
    switch (node.kind) {
      case Formula::Kind::Literal:
        return std::to_string(node.number);
      case Formula::Kind::Tensor:
        return "tensor" + std::to_string(node.number);
      case Formula::Kind::Par:
        return "par" + std::to_string(node.number);
    }
    return {};
  }

 private:
  int add(const Formula& f, int parent, std::size_t formula) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back({f.kind(), -1, -1, parent, formula, 0});
    switch (f.kind()) {
      case Formula::Kind::Literal:
        leaf_of_occurrence.push_back(id);
        nodes[id].number = leaf_of_occurrence.size();
        return id;
      case Formula::Kind::Tensor:
        nodes[id].number = ++tensor_count;
        break;
      case Formula::Kind::Par:
        par_nodes.push_back(id);
        nodes[id].number = par_nodes.size();
        break;
    }
    const int l = add(f.left(), id, formula);
    const int r = add(f.right(), id, formula);
    nodes[id].left = l;
    nodes[id].right = r;
    return id;
  }
};

// ---------------------------------------------------------------------------
// Polarity calculus over the extended grammar (additives, exponentials, ⊸)

enum class Polarity : int { Negative = -1, Neutral = 0, Positive = 1 };

inline std::string to_string(Polarity p) {
  switch (p) {
    case Polarity::Negative: return "-1";
    case Polarity::Neutral: return "0";
    case Polarity::Positive: return "+1";
  }
  return "?";
}

class ExtendedFormula {
 public:
  enum class Kind : unsigned char {
    Literal, Tensor, Par, Lollipop, With, Plus, OfCourse, WhyNot, Negation
  };

  static ExtendedFormula literal(Atom a, bool negated = false) {
    ExtendedFormula f(Kind::Literal);
    f.atom_ = std::move(a);
    f.negated_ = negated;
    return f;
  }
  static ExtendedFormula unary(Kind k, ExtendedFormula arg) {
    ExtendedFormula f(k);
    f.children_.push_back(std::move(arg));
    return f;
  }
  static ExtendedFormula binary(Kind k, ExtendedFormula l, ExtendedFormula r) {
    ExtendedFormula f(k);
    f.children_.push_back(std::move(l));
    f.children_.push_back(std::move(r));
    return f;
  }
  static ExtendedFormula from(const Formula& g) {
    if (g.is_literal()) return literal(g.atom(), g.negated());
    return binary(g.is_tensor() ? Kind::Tensor : Kind::Par, from(g.left()), from(g.right()));
  }

  Kind kind() const { return kind_; }
  const Atom& atom() const { return *atom_; }
  bool negated() const { return negated_; }
  const ExtendedFormula& operand(std::size_t i = 0) const { return children_.at(i); }
  bool is_unary() const { return kind_ == Kind::OfCourse || kind_ == Kind::WhyNot || kind_ == Kind::Negation; }

 private:
  explicit ExtendedFormula(Kind k) : kind_(k) {}

  Kind kind_;
  std::optional<Atom> atom_;
  bool negated_ = false;
  std::vector<ExtendedFormula> children_;
};

inline std::string to_string(const ExtendedFormula& f) {
  using K = ExtendedFormula::Kind;
  switch (f.kind()) {
    case K::Literal: return f.atom().name() + (f.negated() ? "^" : "");
    case K::OfCourse: return "!" + to_string(f.operand());
    case K::WhyNot: return "?" + to_string(f.operand());
    case K::Negation: return "(" + to_string(f.operand()) + ")^";
    default: break;
  }
  const char* op = f.kind() == K::Tensor   ? " * "
                   : f.kind() == K::Par    ? " | "
                   : f.kind() == K::With   ? " & "
                   : f.kind() == K::Plus   ? " + "
                                           : " -o ";
  return "(" + to_string(f.operand(0)) + op + to_string(f.operand(1)) + ")";
}

inline constexpr std::string_view extended_grammar =
    "formula = par ['-o' formula]          (linear implication, right-associative)\n"
    "par     = plus ('|' plus)*\n"
    "plus    = with ('+' with)*\n"
    "with    = tensor ('&' tensor)*\n"
    "tensor  = unary ('*' unary)*\n"
    "unary   = '!' unary | '?' unary | primary '^'*\n"
    "primary = atom | '(' formula ')'";

namespace detail {

class ExtendedParser {
 public:
  explicit ExtendedParser(std::string_view text) : lex_(text) {}

  std::vector<ExtendedFormula> list() {
    std::vector<ExtendedFormula> out;
    if (lex_.at_end()) return out;
    out.push_back(lolli());
    while (lex_.accept(",")) out.push_back(lolli());
    if (!lex_.at_end()) lex_.fail("',' or end-of-input");
    return out;
  }

 private:
  using K = ExtendedFormula::Kind;

  ExtendedFormula lolli() {
    ExtendedFormula f = level(0);
    if (lex_.accept("-o")) return ExtendedFormula::binary(K::Lollipop, std::move(f), lolli());
    return f;
  }
  ExtendedFormula level(int depth) {
    static constexpr std::array<std::pair<const char*, K>, 4> ops{
        {{"|", K::Par}, {"+", K::Plus}, {"&", K::With}, {"*", K::Tensor}}};
    if (depth == static_cast<int>(ops.size())) return unary();
    ExtendedFormula f = level(depth + 1);
    while (lex_.accept(ops[depth].first)) f = ExtendedFormula::binary(ops[depth].second, std::move(f), level(depth + 1));
    return f;
  }
  ExtendedFormula unary() {
    if (lex_.accept("!")) return ExtendedFormula::unary(K::OfCourse, unary());
    if (lex_.accept("?")) return ExtendedFormula::unary(K::WhyNot, unary());
    ExtendedFormula f = primary();
    while (lex_.accept("^")) {
      if (f.kind() == K::Literal) {
        f = ExtendedFormula::literal(f.atom(), !f.negated());
      } else {
        f = ExtendedFormula::unary(K::Negation, std::move(f));
      }
    }
    return f;
  }
  ExtendedFormula primary() {
    if (lex_.accept("(")) {
      ExtendedFormula f = lolli();
      if (!lex_.accept(")")) lex_.fail("')'");
      return f;
    }
    auto name = lex_.identifier();
    if (!name) lex_.fail("atomic");
    return ExtendedFormula::literal(Atom(*name));
  }

  Lexer lex_;
};

}  // namespace detail

inline std::vector<ExtendedFormula> parse_extended_list(std::string_view text) {
  return detail::ExtendedParser(text).list();
}

inline ExtendedFormula parse_extended(std::string_view text) {
  auto list = parse_extended_list(text);
  if (list.size() != 1) throw SyntaxError(0, "a single formula", "expected exactly one formula");
  return list.front();
}

// Connective action on polarities, used as the definition of syntactic polarity.
// Rows are (A, B) in the order (+1,+1), (+1,0), (+1,-1), (0,+1), ..., (-1,-1);
// columns are ⊗, ⅋, ⊸, &, ⊕.
inline constexpr std::array<std::array<int, 5>, 9> binary_polarity_table{{
    {+1, +1, 0, +1, +1},
    {0, 0, 0, 0, 0},
    {0, 0, -1, 0, 0},
    {0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0},
    {0, 0, 0, 0, 0},
    {0, 0, +1, 0, 0},
    {0, 0, 0, 0, 0},
    {-1, -1, 0, -1, -1},
}};

// Rows are A = +1, 0, -1; columns are !A, ?A, A⊥.
inline constexpr std::array<std::array<int, 3>, 3> unary_polarity_table{{
    {-1, +1, -1},
    {-1, +1, 0},
    {-1, +1, +1},
}};

inline Polarity polarity(const ExtendedFormula& f) {
  using K = ExtendedFormula::Kind;
  auto row_of = [](Polarity p) { return 1 - static_cast<int>(p); };  // +1 -> 0, 0 -> 1, -1 -> 2
  switch (f.kind()) {
    case K::Literal:
      return Polarity::Neutral;
    case K::OfCourse:
    case K::WhyNot:
    case K::Negation: {
      const int col = f.kind() == K::OfCourse ? 0 : f.kind() == K::WhyNot ? 1 : 2;
      return static_cast<Polarity>(unary_polarity_table[row_of(polarity(f.operand()))][col]);
    }
    default:
      break;
  }
  int col = 0;
  switch (f.kind()) {
    case K::Tensor: col = 0; break;
    case K::Par: col = 1; break;
    case K::Lollipop: col = 2; break;
    case K::With: col = 3; break;
    case K::Plus: col = 4; break;
    default: break;
  }
  const int row = 3 * row_of(polarity(f.operand(0))) + row_of(polarity(f.operand(1)));
  return static_cast<Polarity>(binary_polarity_table[row][col]);
}

// Side condition of the polarised With rule: every context formula positive.
inline bool with_p_premise_ok(const std::vector<ExtendedFormula>& context) {
  return std::all_of(context.begin(), context.end(),
                     [](const ExtendedFormula& f) { return polarity(f) == Polarity::Positive; });
}

}  // namespace mllgames
