#include "pltlf/closure.hpp"

#include <algorithm>
#include <stdexcept>

namespace pltlf {

ClosureSet::ClosureSet(const Formula& root) : root_(root) {
  if (!is_normalized(root)) {
    throw std::invalid_argument("closure of a formula that is not normalized: " + root.text());
  }
  std::unordered_map<Formula, char> seen;
  std::vector<Formula> work{root};
  while (!work.empty()) {
    Formula f = work.back();
    work.pop_back();
    if (!seen.emplace(f, 1).second) continue;
    for (const auto& c : f.children()) work.push_back(c);
    work.push_back(negate(f));
    if (f.op() == Op::Until) work.push_back(Formula::next(f));
  }
  members_.reserve(seen.size());
  for (const auto& [f, _] : seen) members_.push_back(f);
  std::sort(members_.begin(), members_.end());

  for (std::size_t i = 0; i < members_.size(); ++i) index_.emplace(members_[i], i);
  root_index_ = index_.at(root_);
  negation_.resize(members_.size());
  for (std::size_t i = 0; i < members_.size(); ++i) {
    const Formula& f = members_[i];
    negation_[i] = index_.at(negate(f));
    switch (f.op()) {
      case Op::Prop:
        propositions_.push_back(i);
        variables_.push_back(f.name());
        free_.push_back(i);
        break;
      case Op::Next:
        nexts_.push_back(i);
        free_.push_back(i);
        break;
      case Op::Prob:
        probabilistic_.push_back(i);
        if (negation_[i] > i) free_.push_back(i);
        break;
      default:
        break;
    }
  }
  std::sort(variables_.begin(), variables_.end());
}

std::optional<std::size_t> ClosureSet::find(const Formula& f) const {
  auto it = index_.find(f);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ClosureSet::index_of(const Formula& f) const {
  auto it = index_.find(f);
  if (it == index_.end()) throw std::out_of_range("not a closure member: " + f.text());
  return it->second;
}

std::uint64_t ClosureSet::code_count() const {
  if (free_.size() > 63) {
    throw std::length_error("closure has " + std::to_string(free_.size()) +
                            " independent members; at most 63 are supported");
  }
  return std::uint64_t{1} << free_.size();
}

std::vector<Formula> Atom::formulas(const ClosureSet& c) const {
  std::vector<Formula> out;
  for (std::size_t i = members_.find_first(); i != boost::dynamic_bitset<>::npos;
       i = members_.find_next(i)) {
    out.push_back(c[i]);
  }
  return out;
}

Atom atom_from_code(const ClosureSet& c, std::uint64_t code) {
  const std::size_t n = c.size();
  boost::dynamic_bitset<> bits(n);
  boost::dynamic_bitset<> fixed(n);
  const auto& free = c.free_members();
  for (std::size_t b = 0; b < free.size(); ++b) {
    bits[free[b]] = (code >> b) & 1U;
    fixed[free[b]] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (fixed[i]) continue;
    const Formula& f = c[i];
    switch (f.op()) {
      case Op::True:
        bits[i] = true;
        break;
      case Op::Not:
        bits[i] = !bits[c.index_of(f[0])];
        break;
      case Op::Prob:
        bits[i] = !bits[c.negation(i)];
        break;
      case Op::And: {
        bool all = true;
        for (const auto& k : f.children()) all = all && bits[c.index_of(k)];
        bits[i] = all;
        break;
      }
      case Op::Until:
        bits[i] = bits[c.index_of(f[1])] ||
                  (bits[c.index_of(f[0])] && bits[c.index_of(Formula::next(f))]);
        break;
      default:
        throw std::logic_error("unexpected closure member " + f.text());
    }
  }
  Valuation valuation;
  for (std::size_t i : c.propositions()) {
    if (bits[i]) valuation.insert(c[i].name());
  }
  std::vector<std::size_t> prob;
  for (std::size_t i : c.probabilistic()) {
    if (bits[i]) prob.push_back(i);
  }
  return Atom(std::move(bits), code, std::move(valuation), std::move(prob));
}

bool is_atom(const ClosureSet& c, const boost::dynamic_bitset<>& members) {
  if (members.size() != c.size()) return false;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (members[i] == members[c.negation(i)]) return false;
    const Formula& f = c[i];
    if (f.op() == Op::True && !members[i]) return false;
    if (f.op() == Op::And) {
      bool all = std::all_of(f.children().begin(), f.children().end(),
                             [&](const Formula& k) { return members[c.index_of(k)]; });
      if (members[i] != all) return false;
    }
    if (f.op() == Op::Until) {
      bool unfold = members[c.index_of(f[1])] ||
                    (members[c.index_of(f[0])] && members[c.index_of(Formula::next(f))]);
      if (members[i] != unfold) return false;
    }
  }
  return true;
}

std::optional<Atom> atom_from_formulas(const ClosureSet& c, const std::vector<Formula>& formulas) {
  boost::dynamic_bitset<> bits(c.size());
  for (const auto& f : formulas) {
    auto i = c.find(normalize(f));
    if (!i) return std::nullopt;
    bits[*i] = true;
  }
  if (!is_atom(c, bits)) return std::nullopt;
  std::uint64_t code = 0;
  const auto& free = c.free_members();
  for (std::size_t b = 0; b < free.size(); ++b) {
    if (bits[free[b]]) code |= std::uint64_t{1} << b;
  }
  return atom_from_code(c, code);
}

std::optional<Atom> AtomStream::next() {
  if (next_ >= end_) return std::nullopt;
  return atom_from_code(*closure_, next_++);
}

}  // namespace pltlf
