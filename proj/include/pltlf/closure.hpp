#pragma once

#include "pltlf/formula.hpp"
#include "pltlf/trace.hpp"

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

namespace pltlf {

/// Negation-closed subformula set of a normalized formula, extended with
/// X(ψ₁ U ψ₂) for every until. Members are ordered by size, then text.
class ClosureSet {
 public:
  /// Throws std::invalid_argument unless `root` is normalized.
  explicit ClosureSet(const Formula& root);

  const Formula& root() const { return root_; }
  std::size_t root_index() const { return root_index_; }
  std::size_t size() const { return members_.size(); }
  const Formula& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Formula>& members() const { return members_; }

  std::optional<std::size_t> find(const Formula& f) const;
  /// Throws std::out_of_range when `f` is not a member.
  std::size_t index_of(const Formula& f) const;
  /// Index of the normalized negation. For P⋈p ψ this is P⋈⁻p ψ.
  std::size_t negation(std::size_t i) const { return negation_[i]; }

  /// Probabilistic members, in closure order.
  const std::vector<std::size_t>& probabilistic() const { return probabilistic_; }
  const std::vector<std::size_t>& propositions() const { return propositions_; }
  /// Members of the form X ψ.
  const std::vector<std::size_t>& nexts() const { return nexts_; }

  /// Members whose truth value is chosen freely in an atom: variables, X ψ,
  /// and one representative of every P⋈p ψ / P⋈⁻p ψ pair.
  const std::vector<std::size_t>& free_members() const { return free_; }
  /// Number of code words enumerated by AtomStream. Throws std::length_error
  /// past 63 free members.
  std::uint64_t code_count() const;

  /// Variable names, sorted.
  const std::vector<std::string>& variables() const { return variables_; }

 private:
  Formula root_;
  std::size_t root_index_ = 0;
  std::vector<Formula> members_;
  std::unordered_map<Formula, std::size_t> index_;
  std::vector<std::size_t> negation_;
  std::vector<std::size_t> probabilistic_;
  std::vector<std::size_t> propositions_;
  std::vector<std::size_t> nexts_;
  std::vector<std::size_t> free_;
  std::vector<std::string> variables_;
};

/// A maximally consistent subset of a closure.
class Atom {
 public:
  Atom() = default;
  Atom(boost::dynamic_bitset<> members, std::uint64_t code, Valuation valuation,
       std::vector<std::size_t> probabilistic)
      : members_(std::move(members)),
        code_(code),
        valuation_(std::move(valuation)),
        probabilistic_(std::move(probabilistic)) {}

  bool contains(std::size_t i) const { return members_.test(i); }
  const boost::dynamic_bitset<>& members() const { return members_; }
  /// Position in the AtomStream enumeration.
  std::uint64_t code() const { return code_; }
  const Valuation& valuation() const { return valuation_; }
  /// 𝒫(a): closure indices of the probabilistic members, in closure order.
  const std::vector<std::size_t>& probabilistic() const { return probabilistic_; }

  std::vector<Formula> formulas(const ClosureSet& c) const;

 private:
  boost::dynamic_bitset<> members_;
  std::uint64_t code_ = 0;
  Valuation valuation_;
  std::vector<std::size_t> probabilistic_;
};

/// Builds the atom whose free members are given by the bits of `code`
/// (bit i ↔ free_members()[i]). Every code yields an atom.
Atom atom_from_code(const ClosureSet& c, std::uint64_t code);

/// The atom containing exactly `formulas` (which must list one of ψ, ¬ψ for
/// every member), or nothing when that set is not an atom.
std::optional<Atom> atom_from_formulas(const ClosureSet& c, const std::vector<Formula>& formulas);

/// Independent check of the atom conditions on a member set.
bool is_atom(const ClosureSet& c, const boost::dynamic_bitset<>& members);

/// Lazy, restartable enumeration of At(φ) in code order.
class AtomStream {
 public:
  explicit AtomStream(const ClosureSet& c) : closure_(&c), end_(c.code_count()) {}
  std::optional<Atom> next();
  void reset() { next_ = 0; }

 private:
  const ClosureSet* closure_;
  std::uint64_t next_ = 0;
  std::uint64_t end_;
};

}  // namespace pltlf
