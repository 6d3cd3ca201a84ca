#pragma once

#include "pltlf/linear.hpp"

#include <optional>
#include <vector>

namespace oracle {

/// Vertices of the closure of a bounded polyhedron: every choice of n rows
/// with a unique solution that satisfies all rows (strict ones relaxed).
std::vector<std::vector<pltlf::Rational>> vertices(const pltlf::LinearSystem& sys);

/// Largest value of variable `v` over the vertices; nothing when there are none.
std::optional<pltlf::Rational> vertex_maximum(const pltlf::LinearSystem& sys, std::size_t v);

}  // namespace oracle
