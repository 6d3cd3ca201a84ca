#pragma once

#include "pltlf/formula.hpp"
#include "pltlf/trace.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <vector>

namespace oracle {

/// Bounded search for a tree interpretation: a formula is reported
/// satisfiable when some tree of height ≤ depth whose nodes have at most
/// `width` children satisfies it at the root. Works on surface syntax and
/// evaluates every connective by its satisfaction clause.
class TreeOracle {
 public:
  TreeOracle(const pltlf::Formula& f, std::size_t depth = 3, std::size_t width = 3);

  bool satisfiable() const { return satisfiable_; }
  /// Distinct truth vectors over subformulas realized at some node.
  std::size_t realized_types() const { return types_.size(); }
  /// Smallest height at which the root became satisfiable, -1 if never.
  int height() const { return height_; }

 private:
  using Type = std::uint64_t;
  Type evaluate(const pltlf::Valuation& v, const std::vector<Type>& children,
                std::uint64_t prob_pattern) const;
  bool pattern_feasible(const std::vector<Type>& children, std::uint64_t pattern);

  std::vector<pltlf::Formula> subs_;
  std::vector<std::vector<std::size_t>> kids_;
  std::vector<std::size_t> probs_;
  std::vector<std::string> vars_;
  std::set<Type> types_;
  std::map<std::pair<std::vector<Type>, std::uint64_t>, bool> lp_cache_;
  bool satisfiable_ = false;
  int height_ = -1;
};

}  // namespace oracle
