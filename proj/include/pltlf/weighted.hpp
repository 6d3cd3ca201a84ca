#pragma once

#include "pltlf/tree_automaton.hpp"

#include <json.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace pltlf {

/// Max-times weighted automaton over valuations. A run q₀ … qₙ reads the
/// trace label(q₀) … label(qₙ); its weight is in(q₀)·∏ wt(qᵢ, qᵢ₊₁).
struct WeightedAutomaton {
  std::vector<std::string> variables;
  std::vector<Valuation> labels;
  std::vector<Rational> in;
  /// Outgoing edges with positive weight, sorted by target.
  std::vector<std::vector<std::pair<std::size_t, Rational>>> out;
  std::vector<char> final;
  /// The tree-automaton state each state came from.
  std::vector<std::size_t> origin;

  std::size_t size() const { return labels.size(); }
  /// 0 when there is no edge.
  Rational weight(std::size_t from, std::size_t to) const;
  /// Index of the state built from tree-automaton state `s`, if any.
  std::optional<std::size_t> find_origin(std::size_t s) const;
};

/// B built from a reduced automaton. Throws std::invalid_argument otherwise.
WeightedAutomaton build_weighted(const TreeAutomaton& reduced);

/// w(q): largest weight of a run from q to a final state.
struct BehaviourTable {
  std::vector<Rational> w;
  std::size_t iterations = 0;
};

/// One application of w'(q) = max(w₀(q), max_q' wt(q,q')·w(q')).
std::vector<Rational> behaviour_step(const WeightedAutomaton& b, const std::vector<Rational>& w);
BehaviourTable behaviour_table(const WeightedAutomaton& b);
/// ‖B‖ = max_q in(q)·w(q).
Rational behaviour(const WeightedAutomaton& b, const BehaviourTable& table);
Rational behaviour(const WeightedAutomaton& b);

/// Unweighted automaton accepting exactly the traces of maximal weight.
struct MltAcceptor {
  Rational value;
  std::vector<Valuation> labels;
  std::vector<std::size_t> initial;
  std::vector<std::vector<std::size_t>> next;
  std::vector<char> final;

  bool accepts(const Trace& t) const;
  bool empty() const { return initial.empty(); }
};

MltAcceptor mlt_acceptor(const WeightedAutomaton& b, const BehaviourTable& table);

/// Shortest first, then lexicographic over the printed steps. Throws
/// std::invalid_argument when either bound is zero.
std::vector<Trace> enumerate_mlts(const MltAcceptor& acc, std::size_t max_count,
                                  std::size_t max_len);

/// Finite automaton over valuations. A label is a valuation in trace syntax
/// or "*", which matches every valuation.
struct TraceNFA {
  struct Transition {
    std::size_t from;
    std::string label;
    std::size_t to;
  };
  std::size_t states = 0;
  std::vector<std::size_t> initial;
  std::vector<std::size_t> finals;
  std::vector<Transition> transitions;

  static TraceNFA universal();
  static TraceNFA single(const Trace& t);
  static TraceNFA extending(const Trace& prefix);
  static TraceNFA from_json(const nlohmann::json& j);
  nlohmann::ordered_json to_json() const;
  /// Throws std::invalid_argument on out-of-range states.
  void validate() const;
};

/// The product of `nfa` with `b`: weights from `b`, the NFA reading the label
/// of each state of `b` as it is entered. Throws std::invalid_argument when a
/// label mentions a variable `b` does not know.
WeightedAutomaton product(const WeightedAutomaton& b, const TraceNFA& nfa);

struct LanguageResult {
  Rational probability;
  MltAcceptor acceptor;
};

/// Most-likely-trace analysis of one formula: reduced automaton, B and its
/// behaviour, built once and queried many times.
class Analysis {
 public:
  explicit Analysis(const Formula& f);

  const TreeAutomaton& automaton() const { return reduced_; }
  const WeightedAutomaton& weighted() const { return b_; }
  const BehaviourTable& table() const { return table_; }
  Rational value() const { return behaviour(b_, table_); }
  MltAcceptor acceptor() const { return mlt_acceptor(b_, table_); }

  LanguageResult language(const TraceNFA& nfa) const;
  Rational trace_probability(const Trace& t) const;
  LanguageResult prefix(const Trace& prefix) const;

 private:
  TreeAutomaton reduced_;
  WeightedAutomaton b_;
  BehaviourTable table_;
};

Rational trace_probability(const Formula& f, const Trace& t);
LanguageResult language_probability(const Formula& f, const TraceNFA& nfa);
LanguageResult prefix_extension_query(const Formula& f, const Trace& prefix);

nlohmann::ordered_json to_json(const WeightedAutomaton& b);

}  // namespace pltlf
