#pragma once

#include "pltlf/closure.hpp"
#include "pltlf/linear.hpp"

#include <json.hpp>

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace pltlf {

/// A member Q of some S ⊆ 2^𝒫(a): bit i set iff the i-th probabilistic
/// formula of the atom (closure order) belongs to Q.
using QMask = std::uint32_t;

/// "{}", "{1}", "{1,2}" with 1-based formula positions.
std::string q_label(QMask q);

/// One element S of 𝒮(a) together with a solution of 𝔍(S).
struct Scenario {
  std::vector<QMask> members;  // increasing
  std::vector<Rational> witness;

  /// Position of `q` in members, if present.
  std::optional<std::size_t> position(QMask q) const;
};

using ScenarioFamily = std::vector<Scenario>;

/// 𝔍(S) over the probabilistic formulas `prob` (closure indices). Variables
/// are named x{...} after q_label. Rows: one per formula, then x_Q ≥ 0, then
/// Σ x_Q = 1.
LinearSystem build_system(const ClosureSet& c, const std::vector<std::size_t>& prob,
                          const std::vector<QMask>& members);

/// All S ⊆ 2^𝒫 with a feasible 𝔍(S), by increasing |S|, then by member list.
/// Throws std::length_error for more than four probabilistic formulas.
ScenarioFamily scenario_family(const ClosureSet& c, const std::vector<std::size_t>& prob);

struct GoodStateSet {
  boost::dynamic_bitset<> good;
  /// Sweep at which the state became good (finals: 0), -1 for bad states.
  std::vector<int> distance;
  std::size_t sweeps = 0;
};

/// Tree interpretation (T, ·^I, P). The root's probability is unused.
struct WitnessNode {
  Valuation valuation;
  Rational probability = 1;
  std::vector<WitnessNode> children;
  /// Automaton state the node was built from, if any.
  std::optional<std::size_t> state;

  std::size_t size() const;
  std::size_t depth() const;
};

/// Satisfaction at the root. Until at a leaf requires its right operand.
/// Throws std::invalid_argument if the children of some node do not sum to 1.
bool check_model(const WitnessNode& model, const Formula& f);

/// How the members of a scenario S are realized by children.
enum class Branching {
  /// One or more children per member. Exact for tree interpretations: a
  /// formula is satisfiable iff the automaton is non-empty.
  Grouped,
  /// Exactly one child per member, i.e. hyperedges are the tuples of T_S(a).
  /// Without probabilistic formulas every hyperedge is unary, so this mode
  /// decides LTLf over finite traces.
  OnePerMember,
};

/// A_φ with states At(φ), indexed by atom code. Transitions are never
/// materialized: successor structure is derived per state on demand and
/// cached. Copies share the cache; a copy must stay on one thread while
/// caches are being filled.
class TreeAutomaton {
 public:
  /// Normalizes `f`. Throws std::length_error when the state space exceeds
  /// 2^22 atoms.
  explicit TreeAutomaton(const Formula& f, Branching branching = Branching::Grouped);

  const Formula& formula() const;
  const ClosureSet& closure() const;
  Branching branching() const;

  std::size_t state_count() const;
  const Atom& state(std::size_t s) const;
  bool is_initial(std::size_t s) const;
  bool is_final(std::size_t s) const;
  /// False for states removed by reduce().
  bool is_alive(std::size_t s) const;
  bool is_reduced() const;

  std::vector<std::size_t> states() const;
  std::vector<std::size_t> initial_states() const;
  std::vector<std::size_t> final_states() const;

  /// 𝒮(a), memoized by 𝒫(a).
  const ScenarioFamily& scenarios(std::size_t s) const;

  /// Visits T_S(a) in lexicographic order of state indices; restricted to
  /// alive states after reduce(). The visitor returns false to stop.
  void for_each_tuple(std::size_t s, const Scenario& S,
                      const std::function<bool(const std::vector<std::size_t>&)>& visit) const;
  std::vector<std::vector<std::size_t>> transition_tuples(std::size_t s, const Scenario& S,
                                                          std::size_t limit = SIZE_MAX) const;
  /// Conditions (i) and (ii) checked from closure membership alone.
  bool is_transition(std::size_t s, const Scenario& S, const std::vector<std::size_t>& tuple) const;
  /// Alive children that can realize member `position` of S in some
  /// hyperedge (a tuple of T_S(a) under Branching::OnePerMember).
  std::vector<std::size_t> completable_children(std::size_t s, const Scenario& S,
                                                std::size_t position) const;

  const GoodStateSet& good_states() const;
  /// Restriction to good states; shares all caches with *this.
  TreeAutomaton reduce() const;
  bool is_empty() const;

  /// A finite accepted tree labelled by valuations, children weighted by the
  /// feasibility witness of the chosen scenario.
  std::optional<WitnessNode> witness_model() const;

  /// Debug listing: closure, states, scenarios and (at most `edge_limit`
  /// per state) hyperedges.
  nlohmann::ordered_json to_json(std::size_t edge_limit = 0) const;
  std::string to_text(std::size_t edge_limit = 0) const;

  struct Core;

 private:
  explicit TreeAutomaton(std::shared_ptr<Core> core, bool reduced);
  std::shared_ptr<Core> core_;
  bool reduced_ = false;
};

bool is_satisfiable(const Formula& f, Branching branching = Branching::Grouped);
std::optional<WitnessNode> witness_model(const Formula& f,
                                         Branching branching = Branching::Grouped);

nlohmann::ordered_json to_json(const WitnessNode& model);

}  // namespace pltlf
