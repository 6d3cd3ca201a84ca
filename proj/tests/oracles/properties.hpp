#pragma once

#include "pltlf/pltlf0.hpp"
#include "pltlf/weighted.hpp"

#include <random>
#include <string>
#include <vector>

namespace oracle {

struct Report {
  std::size_t checked = 0;
  std::vector<std::string> failures;

  void fail(std::string what) { failures.push_back(std::move(what)); }
  bool ok() const { return failures.empty(); }
  void merge(const Report& other);
  std::string summary() const;
};

/// All traces of length 1..max_len over `vars`, shortest first.
std::vector<pltlf::Trace> all_traces(const std::vector<std::string>& vars, std::size_t max_len);

/// Subformulas, negation closure, until expansion, no negated probability,
/// and closure(member) ⊆ closure(f).
Report closure_properties(const std::vector<pltlf::Formula>& formulas);

/// Every enumerated atom passes an independent check of the atom conditions
/// and the atom count is at most 2^(|closure|/2).
Report atom_properties(const std::vector<pltlf::Formula>& formulas);

/// normalize is idempotent and, for Prob-free formulas, preserves eval_trace
/// on every trace up to `max_len` steps.
Report normalize_properties(const std::vector<pltlf::Formula>& formulas, std::size_t max_len);

/// Random systems (≤ 5 variables, ≤ 8 rows): feasibility agrees with
/// Fourier–Motzkin, witnesses re-check, maxima agree with the projected
/// bound, and perturbed feasible points never exceed the maximum.
Report lp_properties(std::uint32_t seed, std::size_t systems, std::size_t samples);

/// Under Branching::OnePerMember, Prob-free formulas only have unary
/// hyperedges and accept exactly the traces eval_trace accepts.
Report rank1_properties(const std::vector<pltlf::Formula>& formulas, std::size_t max_len);

/// Hyperedges re-verify against the T_S conditions; reduce preserves
/// satisfiability; witnesses pass check_model.
Report automaton_properties(const std::vector<pltlf::Formula>& formulas);

/// Behaviour iteration is monotone, stabilizes within |Q| sweeps, stays in
/// [0,1]; ‖B‖ > 0 iff satisfiable; acceptor traces carry probability ‖B‖;
/// singleton languages agree with trace_probability.
Report behaviour_properties(const std::vector<pltlf::Formula>& formulas, std::uint32_t seed);

/// Maxima agree with vertex enumeration, unsatisfiable scenarios get 0, the
/// maxima sum to at least 1, and acc(t·s) ⊆ acc(t).
Report pltlf0_properties(const std::vector<pltlf::Pltlf0Formula>& formulas, std::uint32_t seed);

/// Random two-constraint PLTLf⁰ formulas over {a, b}.
std::vector<pltlf::Pltlf0Formula> random_pltlf0(std::mt19937& rng, std::size_t count);

}  // namespace oracle
