#pragma once

#include "pltlf/linear.hpp"

#include <optional>
#include <vector>

namespace oracle {

using pltlf::Rational;

/// a·x < b (strict) or a·x ≤ b.
struct Row {
  std::vector<Rational> a;
  Rational b;
  bool strict = false;
};

/// Rows of `sys` rewritten into ≤ / < form.
std::vector<Row> rows_of(const pltlf::LinearSystem& sys);

/// Eliminates variable `v` (its coefficient is zero in the result).
std::vector<Row> eliminate(const std::vector<Row>& rows, std::size_t v);

bool fm_feasible(const pltlf::LinearSystem& sys);

struct Bound {
  Rational value;
  bool attained = false;
};

/// Supremum of variable `v` by projecting onto it. Nothing when infeasible
/// or unbounded.
std::optional<Bound> fm_supremum(const pltlf::LinearSystem& sys, std::size_t v);

}  // namespace oracle
