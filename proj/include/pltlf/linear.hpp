#pragma once

#include "pltlf/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pltlf {

enum class Relation { LE, GE, LT, GT, EQ };

Relation relation_of(Comparison c);
std::string_view symbol(Relation r);
bool is_strict(Relation r);
bool holds(Relation r, const Rational& lhs, const Rational& rhs);

using Term = std::pair<std::size_t, Rational>;

/// Σ terms ⋈ bound. Terms are sorted by variable, merged, and free of zeros.
struct LinearConstraint {
  std::vector<Term> terms;
  Relation relation = Relation::LE;
  Rational bound;
};

class LinearSystem {
 public:
  /// Throws std::invalid_argument on a duplicate name.
  std::size_t add_variable(std::string name);
  std::optional<std::size_t> find_variable(std::string_view name) const;
  /// Throws std::out_of_range for an unknown name.
  std::size_t variable(std::string_view name) const;

  /// Throws std::out_of_range when a term references an undeclared variable.
  void add(std::vector<Term> terms, Relation relation, Rational bound);

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  bool has_strict() const;

  /// Exact check of every row.
  bool satisfied_by(const std::vector<Rational>& point) const;

  /// One row per line, relation symbols aligned.
  std::string to_string() const;

 private:
  std::vector<std::string> variables_;
  std::vector<LinearConstraint> constraints_;
};

struct FeasibilityResult {
  bool feasible = false;
  /// Satisfies every row exactly, strict ones included. Empty when infeasible.
  std::vector<Rational> witness;
};

struct Optimum {
  Rational supremum;
  bool attained = false;
  std::optional<std::vector<Rational>> witness;
};

class InfeasibleSystem : public std::runtime_error {
 public:
  InfeasibleSystem() : std::runtime_error("linear system has no solution") {}
  explicit InfeasibleSystem(const std::string& what) : std::runtime_error(what) {}
};

class UnboundedObjective : public std::runtime_error {
 public:
  explicit UnboundedObjective(const std::string& var)
      : std::runtime_error("objective " + var + " is unbounded") {}
};

FeasibilityResult solve_feasibility(const LinearSystem& sys);

/// Supremum of one variable. Without strict rows the witness is the
/// lexicographically smallest optimal point over the declared variable order.
/// Throws InfeasibleSystem or UnboundedObjective.
Optimum maximize(const LinearSystem& sys, std::size_t var, bool want_witness = true);
Optimum maximize(const LinearSystem& sys, std::string_view var, bool want_witness = true);

}  // namespace pltlf
