#include "pltlf/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <ostream>
#include <set>
#include <unordered_set>

namespace pltlf {

struct Formula::Node {
  Op op = Op::True;
  std::string name;
  Comparison cmp = Comparison::LE;
  Rational bound;
  std::vector<Formula> children;
  std::size_t size = 1;
  int level = 6;
  bool has_prob = false;
  std::string text;
  std::size_t hash = 0;
};

namespace {

constexpr int kImpliesLevel = 1;
constexpr int kOrLevel = 2;
constexpr int kAndLevel = 3;
constexpr int kUntilLevel = 4;
constexpr int kUnaryLevel = 5;
constexpr int kAtomLevel = 6;

bool is_keyword(std::string_view s) {
  return s == "true" || s == "false" || s == "X" || s == "F" || s == "G" || s == "U" || s == "P";
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool ident_char(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

std::string quote(std::string_view name) {
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

bool is_plain_identifier(std::string_view name) {
  if (name.empty() || !ident_start(static_cast<unsigned char>(name.front()))) return false;
  for (char c : name) {
    if (!ident_char(static_cast<unsigned char>(c))) return false;
  }
  return !is_keyword(name);
}

Formula::Formula() : Formula(top()) {}

Formula::Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Formula Formula::make(Node node) {
  auto wrap = [](const Formula& child, int min_level) {
    if (child.node_->level < min_level) return "(" + child.text() + ")";
    return child.text();
  };
  auto unary = [&](std::string_view keyword, const Formula& child) {
    std::string inner = wrap(child, kUnaryLevel);
    if (keyword == "!" || inner.front() == '(') return std::string(keyword) + inner;
    return std::string(keyword) + " " + inner;
  };

  node.size = 1;
  node.has_prob = node.op == Op::Prob;
  for (const auto& c : node.children) {
    node.size += c.size();
    node.has_prob = node.has_prob || c.has_probability();
  }

  const auto& ch = node.children;
  switch (node.op) {
    case Op::Prop:
      node.text = is_plain_identifier(node.name) ? node.name : quote(node.name);
      node.level = kAtomLevel;
      break;
    case Op::True:
      node.text = "true";
      node.level = kAtomLevel;
      break;
    case Op::False:
      node.text = "false";
      node.level = kAtomLevel;
      break;
    case Op::Not:
      node.text = unary("!", ch[0]);
      node.level = kUnaryLevel;
      break;
    case Op::Next:
      node.text = unary("X", ch[0]);
      node.level = kUnaryLevel;
      break;
    case Op::Eventually:
      node.text = unary("F", ch[0]);
      node.level = kUnaryLevel;
      break;
    case Op::Always:
      node.text = unary("G", ch[0]);
      node.level = kUnaryLevel;
      break;
    case Op::And:
      for (std::size_t i = 0; i < ch.size(); ++i) {
        if (i) node.text += " & ";
        node.text += wrap(ch[i], kUntilLevel);
      }
      node.level = kAndLevel;
      break;
    case Op::Or:
      node.text = wrap(ch[0], kOrLevel) + " | " + wrap(ch[1], kAndLevel);
      node.level = kOrLevel;
      break;
    case Op::Implies:
      node.text = wrap(ch[0], kOrLevel) + " -> " + wrap(ch[1], kImpliesLevel);
      node.level = kImpliesLevel;
      break;
    case Op::Until:
      node.text = wrap(ch[0], kUnaryLevel) + " U " + wrap(ch[1], kUntilLevel);
      node.level = kUntilLevel;
      break;
    case Op::Prob:
      node.text = "P" + std::string(symbol(node.cmp)) + to_display_string(node.bound) + "[" +
                  ch[0].text() + "]";
      node.level = kAtomLevel;
      break;
  }
  node.hash = std::hash<std::string>{}(node.text);
  return Formula(std::make_shared<const Node>(std::move(node)));
}

Formula Formula::prop(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  Node n;
  n.op = Op::Prop;
  n.name = std::move(name);
  return make(std::move(n));
}

Formula Formula::top() {
  static const Formula t = [] {
    Node n;
    n.op = Op::True;
    return make(std::move(n));
  }();
  return t;
}

Formula Formula::bottom() {
  Node n;
  n.op = Op::False;
  return make(std::move(n));
}

Formula Formula::negation(Formula operand) {
  Node n;
  n.op = Op::Not;
  n.children = {std::move(operand)};
  return make(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> operands) {
  if (operands.empty()) return top();
  if (operands.size() == 1) return operands.front();
  Node n;
  n.op = Op::And;
  n.children = std::move(operands);
  return make(std::move(n));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  Node n;
  n.op = Op::Or;
  n.children = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  Node n;
  n.op = Op::Implies;
  n.children = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

Formula Formula::next(Formula operand) {
  Node n;
  n.op = Op::Next;
  n.children = {std::move(operand)};
  return make(std::move(n));
}

Formula Formula::until(Formula lhs, Formula rhs) {
  Node n;
  n.op = Op::Until;
  n.children = {std::move(lhs), std::move(rhs)};
  return make(std::move(n));
}

Formula Formula::eventually(Formula operand) {
  Node n;
  n.op = Op::Eventually;
  n.children = {std::move(operand)};
  return make(std::move(n));
}

Formula Formula::always(Formula operand) {
  Node n;
  n.op = Op::Always;
  n.children = {std::move(operand)};
  return make(std::move(n));
}

Formula Formula::probability(Comparison cmp, Rational bound, Formula operand) {
  bound.canonicalize();
  if (!is_probability(bound)) {
    throw std::invalid_argument("probability " + to_compact_string(bound) + " out of range [0,1]");
  }
  Node n;
  n.op = Op::Prob;
  n.cmp = cmp;
  n.bound = std::move(bound);
  n.children = {std::move(operand)};
  return make(std::move(n));
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
Comparison Formula::comparison() const { return node_->cmp; }
const Rational& Formula::bound() const { return node_->bound; }
const std::vector<Formula>& Formula::children() const { return node_->children; }
std::size_t Formula::size() const { return node_->size; }
const std::string& Formula::text() const { return node_->text; }
std::size_t Formula::hash() const { return node_->hash; }
bool Formula::has_probability() const { return node_->has_prob; }

std::vector<std::string> Formula::variables() const {
  std::set<std::string> names;
  std::vector<const Node*> stack{node_.get()};
  while (!stack.empty()) {
    const Node* n = stack.back();
    stack.pop_back();
    if (n->op == Op::Prop) names.insert(n->name);
    for (const auto& c : n->children) stack.push_back(c.node_.get());
  }
  return {names.begin(), names.end()};
}

bool operator==(const Formula& a, const Formula& b) {
  return a.node_ == b.node_ || (a.node_->hash == b.node_->hash && a.node_->text == b.node_->text);
}

bool operator<(const Formula& a, const Formula& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.text() < b.text();
}

std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << f.text(); }

// ---------------------------------------------------------------------------
// Normalization

Formula negate(const Formula& f) {
  switch (f.op()) {
    case Op::Not:
      return f[0];
    case Op::Prob:
      return Formula::probability(inverse(f.comparison()), f.bound(), f[0]);
    default:
      return Formula::negation(f);
  }
}

namespace {

Formula core_conjunction(const std::vector<Formula>& operands) {
  std::vector<Formula> flat;
  std::unordered_set<Formula> seen;
  for (const auto& o : operands) {
    if (o.op() == Op::And) {
      for (const auto& c : o.children()) {
        if (seen.insert(c).second) flat.push_back(c);
      }
    } else if (seen.insert(o).second) {
      flat.push_back(o);
    }
  }
  return Formula::conjunction(std::move(flat));
}

}  // namespace

Formula normalize(const Formula& f) {
  switch (f.op()) {
    case Op::Prop:
    case Op::True:
      return f;
    case Op::False:
      return Formula::negation(Formula::top());
    case Op::Not:
      return negate(normalize(f[0]));
    case Op::And: {
      std::vector<Formula> parts;
      parts.reserve(f.children().size());
      for (const auto& c : f.children()) parts.push_back(normalize(c));
      return core_conjunction(parts);
    }
    case Op::Or:
      return negate(core_conjunction({negate(normalize(f[0])), negate(normalize(f[1]))}));
    case Op::Implies:
      return negate(core_conjunction({normalize(f[0]), negate(normalize(f[1]))}));
    case Op::Next:
      return Formula::next(normalize(f[0]));
    case Op::Until:
      return Formula::until(normalize(f[0]), normalize(f[1]));
    case Op::Eventually:
      return Formula::until(Formula::top(), normalize(f[0]));
    case Op::Always:
      return negate(Formula::until(Formula::top(), negate(normalize(f[0]))));
    case Op::Prob:
      return Formula::probability(f.comparison(), f.bound(), normalize(f[0]));
  }
  return f;
}

bool is_normalized(const Formula& f) {
  switch (f.op()) {
    case Op::Prop:
    case Op::True:
      return true;
    case Op::Not:
      return f[0].op() != Op::Not && f[0].op() != Op::Prob && is_normalized(f[0]);
    case Op::And: {
      if (f.children().size() < 2) return false;
      std::unordered_set<Formula> seen;
      for (const auto& c : f.children()) {
        if (c.op() == Op::And || !seen.insert(c).second || !is_normalized(c)) return false;
      }
      return true;
    }
    case Op::Next:
    case Op::Prob:
      return is_normalized(f[0]);
    case Op::Until:
      return is_normalized(f[0]) && is_normalized(f[1]);
    default:
      return false;
  }
}

Formula substitute(const Formula& f, const std::function<std::string(const std::string&)>& rename) {
  switch (f.op()) {
    case Op::Prop:
      return Formula::prop(rename(f.name()));
    case Op::True:
    case Op::False:
      return f;
    case Op::Not:
      return Formula::negation(substitute(f[0], rename));
    case Op::And: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(substitute(c, rename));
      return Formula::conjunction(std::move(parts));
    }
    case Op::Or:
      return Formula::disjunction(substitute(f[0], rename), substitute(f[1], rename));
    case Op::Implies:
      return Formula::implication(substitute(f[0], rename), substitute(f[1], rename));
    case Op::Next:
      return Formula::next(substitute(f[0], rename));
    case Op::Until:
      return Formula::until(substitute(f[0], rename), substitute(f[1], rename));
    case Op::Eventually:
      return Formula::eventually(substitute(f[0], rename));
    case Op::Always:
      return Formula::always(substitute(f[0], rename));
    case Op::Prob:
      return Formula::probability(f.comparison(), f.bound(), substitute(f[0], rename));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Parser

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                         ": " + message),
      message_(message),
      line_(line),
      column_(column) {}

namespace {

enum class Tok {
  End,
  Ident,
  Number,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Next,
  Eventually,
  Always,
  Until,
  Prob,
  Le,
  Ge,
  Lt,
  Gt,
  LParen,
  RParen,
  LBracket,
  RBracket,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      unsigned char c = static_cast<unsigned char>(src_[pos_]);
      if (c == '"') {
        t.kind = Tok::Ident;
        t.text = quoted(t);
      } else if (ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && ident_char(static_cast<unsigned char>(src_[pos_]))) advance();
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = keyword(t.text);
      } else if (std::isdigit(c) || c == '.') {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.' ||
                src_[pos_] == '/')) {
          advance();
        }
        t.kind = Tok::Number;
        t.text = std::string(src_.substr(start, pos_ - start));
      } else {
        t.kind = punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  std::string quoted(const Token& t) {
    advance();
    std::string out;
    while (true) {
      if (pos_ >= src_.size()) throw ParseError("unterminated quoted identifier", t.line, t.column);
      char c = src_[pos_];
      if (c == '"') {
        advance();
        break;
      }
      if (c == '\\' && pos_ + 1 < src_.size()) {
        advance();
        c = src_[pos_];
      }
      out += c;
      advance();
    }
    if (out.empty()) throw ParseError("empty quoted identifier", t.line, t.column);
    return out;
  }

  static Tok keyword(std::string_view s) {
    if (s == "true") return Tok::True;
    if (s == "false") return Tok::False;
    if (s == "X") return Tok::Next;
    if (s == "F") return Tok::Eventually;
    if (s == "G") return Tok::Always;
    if (s == "U") return Tok::Until;
    if (s == "P") return Tok::Prob;
    return Tok::Ident;
  }

  Tok punct(Token& t) {
    char c = src_[pos_];
    auto next_is = [&](char n) { return pos_ + 1 < src_.size() && src_[pos_ + 1] == n; };
    auto take = [&](std::size_t n, Tok kind) {
      t.text = std::string(src_.substr(pos_, n));
      for (std::size_t i = 0; i < n; ++i) advance();
      return kind;
    };
    switch (c) {
      case '!': return take(1, Tok::Not);
      case '&': return take(1, Tok::And);
      case '|': return take(1, Tok::Or);
      case '(': return take(1, Tok::LParen);
      case ')': return take(1, Tok::RParen);
      case '[': return take(1, Tok::LBracket);
      case ']': return take(1, Tok::RBracket);
      case '-':
        if (next_is('>')) return take(2, Tok::Implies);
        break;
      case '<':
        return next_is('=') ? take(2, Tok::Le) : take(1, Tok::Lt);
      case '>':
        return next_is('=') ? take(2, Tok::Ge) : take(1, Tok::Gt);
      default:
        break;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", t.line, t.column);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Formula parse() {
    Formula f = implication();
    if (peek().kind != Tok::End) fail("unexpected " + describe(peek()));
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }
  bool accept(Tok kind) {
    if (peek().kind != kind) return false;
    ++pos_;
    return true;
  }
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, peek().line, peek().column);
  }
  void expect(Tok kind, std::string_view what) {
    if (!accept(kind)) fail("expected " + std::string(what) + ", found " + describe(peek()));
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (accept(Tok::Implies)) return Formula::implication(lhs, implication());
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (accept(Tok::Or)) lhs = Formula::disjunction(lhs, conjunction());
    return lhs;
  }

  Formula conjunction() {
    std::vector<Formula> parts{until()};
    while (accept(Tok::And)) parts.push_back(until());
    return Formula::conjunction(std::move(parts));
  }

  Formula until() {
    Formula lhs = unary();
    if (accept(Tok::Until)) return Formula::until(lhs, until());
    return lhs;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Not: take(); return Formula::negation(unary());
      case Tok::Next: take(); return Formula::next(unary());
      case Tok::Eventually: take(); return Formula::eventually(unary());
      case Tok::Always: take(); return Formula::always(unary());
      default: return primary();
    }
  }

  Formula primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::True: take(); return Formula::top();
      case Tok::False: take(); return Formula::bottom();
      case Tok::Ident: take(); return Formula::prop(t.text);
      case Tok::LParen: {
        take();
        Formula f = implication();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Prob: return probability();
      default: fail("expected a formula, found " + describe(t));
    }
  }

  Formula probability() {
    take();
    Comparison cmp;
    switch (peek().kind) {
      case Tok::Le: cmp = Comparison::LE; break;
      case Tok::Ge: cmp = Comparison::GE; break;
      case Tok::Lt: cmp = Comparison::LT; break;
      case Tok::Gt: cmp = Comparison::GT; break;
      default: fail("expected one of <=, >=, <, > after P, found " + describe(peek()));
    }
    take();
    if (peek().kind != Tok::Number) fail("expected a probability, found " + describe(peek()));
    const Token& num = take();
    Rational bound;
    try {
      bound = parse_rational(num.text);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), num.line, num.column);
    }
    if (!is_probability(bound)) {
      throw ParseError("probability " + num.text + " out of range [0,1]", num.line, num.column);
    }
    expect(Tok::LBracket, "'['");
    Formula inner = implication();
    expect(Tok::RBracket, "']'");
    return Formula::probability(cmp, bound, inner);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Formula parse_formula(std::string_view text) {
  return Parser(Lexer(text).run()).parse();
}

}  // namespace pltlf
