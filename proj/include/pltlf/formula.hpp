#pragma once

#include "pltlf/rational.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pltlf {

enum class Op : std::uint8_t {
  Prop,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Next,
  Until,
  Eventually,
  Always,
  Prob,
};

/// Immutable formula handle. Nodes are shared; copying a Formula is cheap.
///
/// Surface formulas may use every connective. normalize() rewrites them into
/// the core fragment {Prop, True, Not, And, Next, Until, Prob} in which
/// conjunctions are n-ary and flat, no Not wraps a Not or a Prob, and False,
/// Or, Implies, Eventually and Always do not occur.
///
/// Equality and ordering are structural. Ordering is by node count, then by
/// canonical text, which is the order closure members and automaton states
/// are laid out in.
class Formula {
 public:
  Formula();  // ⊤

  static Formula prop(std::string name);
  static Formula top();
  static Formula bottom();
  static Formula negation(Formula operand);
  /// n-ary; an empty list gives ⊤ and a single operand is returned unchanged.
  static Formula conjunction(std::vector<Formula> operands);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula next(Formula operand);
  static Formula until(Formula lhs, Formula rhs);
  static Formula eventually(Formula operand);
  static Formula always(Formula operand);
  /// Throws std::invalid_argument unless 0 <= bound <= 1.
  static Formula probability(Comparison cmp, Rational bound, Formula operand);

  Op op() const;
  const std::string& name() const;
  Comparison comparison() const;
  const Rational& bound() const;
  const std::vector<Formula>& children() const;
  const Formula& operator[](std::size_t i) const { return children()[i]; }

  std::size_t size() const;
  const std::string& text() const;
  std::size_t hash() const;
  bool has_probability() const;

  /// Sorted, without duplicates.
  std::vector<std::string> variables() const;

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node);
  static Formula make(Node node);

  std::shared_ptr<const Node> node_;
};

std::ostream& operator<<(std::ostream& os, const Formula& f);

Formula normalize(const Formula& f);

/// Negation inside the core fragment: strips a Not, flips a Prob comparison,
/// otherwise wraps in Not. Expects a normalized argument.
Formula negate(const Formula& f);

bool is_normalized(const Formula& f);

/// Renames propositional variables; names missing from the map are kept.
Formula substitute(const Formula& f, const std::function<std::string(const std::string&)>& rename);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

Formula parse_formula(std::string_view text);

/// Whether `name` can be printed without quotes.
bool is_plain_identifier(std::string_view name);

}  // namespace pltlf

template <>
struct std::hash<pltlf::Formula> {
  std::size_t operator()(const pltlf::Formula& f) const noexcept { return f.hash(); }
};
