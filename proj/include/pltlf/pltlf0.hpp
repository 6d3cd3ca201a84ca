#pragma once

#include "pltlf/linear.hpp"
#include "pltlf/tree_automaton.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pltlf {

struct Constraint {
  Comparison cmp;
  Rational bound;
  Formula formula;  // LTLf, no probabilistic operator
};

/// A PLTLf⁰ formula: an ordered set of constraints P⋈p φ.
struct Pltlf0Formula {
  std::vector<Constraint> constraints;
  /// Free-text comments kept next to constraints when printing; same length
  /// as `constraints` or empty.
  std::vector<std::string> notes;

  std::size_t size() const { return constraints.size(); }
  /// Throws std::invalid_argument when a formula has a probabilistic operator
  /// or a bound leaves [0,1].
  void validate() const;
};

/// One constraint per line, `P<cmp><number> : <formula>`; '#' starts a
/// comment outside quoted names. Throws ParseError with the line number.
Pltlf0Formula parse_pltlf0(std::string_view text);
Pltlf0Formula load_pltlf0(const std::string& path);
std::string format_pltlf0(const Pltlf0Formula& phi);

/// Binary index, first character for the first constraint: scenario 1 of
/// two constraints is "01" = {¬φ₁, φ₂}.
std::string scenario_name(std::size_t index, std::size_t n);
bool scenario_holds(std::size_t index, std::size_t n, std::size_t j);
std::vector<Formula> scenario_formulas(const Pltlf0Formula& phi, std::size_t index);
std::string scenario_description(const Pltlf0Formula& phi, std::size_t index);

/// Rank-1 view of the automaton of a set of LTLf formulas. Every good atom
/// records which of the tracked formulas it contains (its pattern); runs
/// move along unary transitions between good atoms.
class PrefixAutomaton {
 public:
  explicit PrefixAutomaton(std::vector<Formula> tracked);

  std::size_t tracked() const { return tracked_.size(); }
  const std::vector<std::string>& variables() const { return variables_; }

  /// Some good atom has (pattern & mask) == value.
  bool realizable(std::uint64_t mask, std::uint64_t value) const;
  /// Good atoms with the required pattern whose valuation matches `v`.
  std::vector<std::size_t> start(std::uint64_t mask, std::uint64_t value, const Valuation& v) const;
  std::vector<std::size_t> step(const std::vector<std::size_t>& frontier, const Valuation& v) const;

  /// Whether the formulas selected by (mask, value) admit a trace extending `t`.
  bool accepts(std::uint64_t mask, std::uint64_t value, const Trace& t) const;

 private:
  std::vector<Formula> tracked_;
  std::vector<std::string> variables_;
  std::vector<Valuation> labels_;
  std::vector<std::uint64_t> pattern_;
  std::vector<std::uint64_t> next_key_;
  std::map<std::uint64_t, std::vector<std::size_t>> by_arg_key_;
};

struct ScenarioTable {
  std::size_t n = 0;
  std::vector<char> satisfiable;
  LinearSystem system;
  bool feasible = false;
  std::vector<Rational> witness;
  /// Filled by scenario_maxima.
  std::vector<Rational> maxima;
  std::vector<char> attained;

  std::size_t count() const { return satisfiable.size(); }
};

/// Scenario satisfiability, L_Φ and its feasibility.
ScenarioTable build_lphi(const Pltlf0Formula& phi);
bool is_satisfiable0(const Pltlf0Formula& phi);
/// Throws InfeasibleSystem when L_Φ has no solution. `jobs` > 1 runs the
/// independent maximizations on worker threads; results do not depend on it.
ScenarioTable scenario_maxima(const Pltlf0Formula& phi, unsigned jobs = 1);

/// Most likely accepting scenario over precomputed maxima; `accepting[i]` says
/// whether S_i accepts the prefix. Ties go to the smallest index.
long most_likely_index(const ScenarioTable& table, const std::vector<char>& accepting);

/// Shared, immutable context of a monitor.
struct MonitorContext {
  Pltlf0Formula phi;
  ScenarioTable table;
  std::optional<Formula> property;
  /// Constraint j is tracked as distinct formula group[j].
  std::vector<std::size_t> group;
  PrefixAutomaton automaton;
  std::uint64_t mask = 0;

  /// Required pattern of scenario `index` (and of the property, if any).
  std::uint64_t pattern(std::size_t index) const;

  MonitorContext(Pltlf0Formula phi, ScenarioTable table, std::optional<Formula> property);
};

class MonitorState {
 public:
  /// Throws InfeasibleSystem when Φ is unsatisfiable.
  static MonitorState start(const Pltlf0Formula& phi, std::optional<Formula> property = std::nullopt,
                            unsigned jobs = 1);
  explicit MonitorState(std::shared_ptr<const MonitorContext> ctx);

  MonitorState step(const Valuation& v) const;

  const MonitorContext& context() const { return *ctx_; }
  const Trace& prefix() const { return prefix_; }
  /// acc(prefix), ascending.
  std::vector<std::size_t> alive() const;
  long best() const { return best_; }
  Rational probability() const;
  bool violated() const { return best_ < 0 || probability() == 0; }

 private:
  struct Entry {
    std::size_t index;
    std::vector<std::size_t> frontier;
  };
  void refresh();

  std::shared_ptr<const MonitorContext> ctx_;
  Trace prefix_;
  std::vector<Entry> alive_;
  long best_ = -1;
};

long most_likely_scenario(const Pltlf0Formula& phi, const Trace& t);
long monitor_with_property(const Pltlf0Formula& phi, const Formula& psi, const Trace& t);
bool accepts_prefix(const Pltlf0Formula& phi, std::size_t index, const Trace& t);

Formula to_pltlf(const Pltlf0Formula& phi);

}  // namespace pltlf
