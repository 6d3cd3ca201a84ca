#pragma once

#include "pltlf/formula.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace pltlf {

/// The variables a step makes true.
using Valuation = std::set<std::string>;
using Trace = std::vector<Valuation>;

/// "-" is the empty valuation, otherwise a comma-separated list of names.
Valuation parse_valuation(std::string_view text);
/// Steps separated by ';'. An empty or all-blank string gives an empty trace.
Trace parse_trace(std::string_view text);

std::string format_valuation(const Valuation& v);
std::string format_trace(const Trace& t);

/// Finite-trace LTLf satisfaction at position 0. Next is strong, so X φ is
/// false at the last step. Throws std::invalid_argument on an empty trace or
/// when `f` contains a probabilistic operator.
bool eval_trace(const Formula& f, const Trace& t);

/// Restriction of `v` to `vars`.
Valuation project(const Valuation& v, const std::vector<std::string>& vars);

}  // namespace pltlf
