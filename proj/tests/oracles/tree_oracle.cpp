#include "tree_oracle.hpp"

#include "fourier_motzkin.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace oracle {

using pltlf::Formula;
using pltlf::Op;

TreeOracle::TreeOracle(const Formula& f, std::size_t depth, std::size_t width) {
  std::unordered_map<Formula, std::size_t> index;
  std::function<std::size_t(const Formula&)> visit = [&](const Formula& g) -> std::size_t {
    if (auto it = index.find(g); it != index.end()) return it->second;
    std::vector<std::size_t> k;
    for (const auto& c : g.children()) k.push_back(visit(c));
    std::size_t i = subs_.size();
    subs_.push_back(g);
    kids_.push_back(std::move(k));
    if (g.op() == Op::Prob) probs_.push_back(i);
    index.emplace(g, i);
    return i;
  };
  const std::size_t root = visit(f);
  if (subs_.size() > 64) throw std::length_error("formula too large for the oracle");
  vars_ = f.variables();

  std::vector<pltlf::Valuation> vals;
  for (std::size_t m = 0; m < (std::size_t{1} << vars_.size()); ++m) {
    pltlf::Valuation v;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
      if ((m >> i) & 1U) v.insert(vars_[i]);
    }
    vals.push_back(std::move(v));
  }
  auto has_root = [&](Type t) { return (t >> root) & 1U; };

  std::set<Type> level;
  for (const auto& v : vals) level.insert(evaluate(v, {}, 0));
  types_ = level;
  if (std::any_of(level.begin(), level.end(), has_root)) {
    satisfiable_ = true;
    height_ = 0;
    return;
  }
  const std::uint64_t patterns = std::uint64_t{1} << probs_.size();
  for (std::size_t d = 1; d <= depth; ++d) {
    std::vector<Type> prev(types_.begin(), types_.end());
    std::set<Type> next = types_;
    std::vector<Type> children;
    std::function<void(std::size_t)> choose = [&](std::size_t from) {
      if (!children.empty()) {
        for (std::uint64_t p = 0; p < patterns; ++p) {
          if (!probs_.empty() && !pattern_feasible(children, p)) continue;
          for (const auto& v : vals) next.insert(evaluate(v, children, p));
        }
      }
      if (children.size() == width) return;
      for (std::size_t i = from; i < prev.size(); ++i) {
        children.push_back(prev[i]);
        choose(i);
        children.pop_back();
      }
    };
    choose(0);
    types_ = std::move(next);
    if (std::any_of(types_.begin(), types_.end(), has_root)) {
      satisfiable_ = true;
      height_ = static_cast<int>(d);
      return;
    }
  }
}

bool TreeOracle::pattern_feasible(const std::vector<Type>& children, std::uint64_t pattern) {
  // Only the arguments of probabilistic subformulas matter.
  std::vector<Type> key;
  for (Type t : children) {
    Type k = 0;
    for (std::size_t j = 0; j < probs_.size(); ++j) {
      if ((t >> kids_[probs_[j]][0]) & 1U) k |= Type{1} << j;
    }
    key.push_back(k);
  }
  auto cache_key = std::make_pair(key, pattern);
  if (auto it = lp_cache_.find(cache_key); it != lp_cache_.end()) return it->second;

  pltlf::LinearSystem sys;
  std::vector<std::size_t> x;
  for (std::size_t i = 0; i < key.size(); ++i) x.push_back(sys.add_variable("x" + std::to_string(i)));
  for (std::size_t v : x) sys.add({{v, 1}}, pltlf::Relation::GE, 0);
  std::vector<pltlf::Term> sum;
  for (std::size_t v : x) sum.emplace_back(v, 1);
  sys.add(sum, pltlf::Relation::EQ, 1);
  for (std::size_t j = 0; j < probs_.size(); ++j) {
    const Formula& p = subs_[probs_[j]];
    std::vector<pltlf::Term> terms;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if ((key[i] >> j) & 1U) terms.emplace_back(x[i], 1);
    }
    auto cmp = p.comparison();
    if (!((pattern >> j) & 1U)) cmp = pltlf::inverse(cmp);
    sys.add(terms, pltlf::relation_of(cmp), p.bound());
  }
  bool ok = fm_feasible(sys);
  lp_cache_.emplace(std::move(cache_key), ok);
  return ok;
}

TreeOracle::Type TreeOracle::evaluate(const pltlf::Valuation& v, const std::vector<Type>& children,
                                      std::uint64_t prob_pattern) const {
  Type t = 0;
  auto in = [&](Type x, std::size_t i) { return ((x >> i) & 1U) != 0; };
  auto all_children = [&](std::size_t i) {
    return std::all_of(children.begin(), children.end(), [&](Type c) { return in(c, i); });
  };
  auto some_child = [&](std::size_t i) {
    return std::any_of(children.begin(), children.end(), [&](Type c) { return in(c, i); });
  };
  const bool leaf = children.empty();
  std::size_t pj = 0;
  for (std::size_t i = 0; i < subs_.size(); ++i) {
    const Formula& g = subs_[i];
    const auto& k = kids_[i];
    bool val = false;
    switch (g.op()) {
      case Op::Prop: val = v.count(g.name()) > 0; break;
      case Op::True: val = true; break;
      case Op::False: val = false; break;
      case Op::Not: val = !in(t, k[0]); break;
      case Op::And:
        val = std::all_of(k.begin(), k.end(), [&](std::size_t c) { return in(t, c); });
        break;
      case Op::Or: val = in(t, k[0]) || in(t, k[1]); break;
      case Op::Implies: val = !in(t, k[0]) || in(t, k[1]); break;
      case Op::Next: val = !leaf && all_children(k[0]); break;
      case Op::Until: val = in(t, k[1]) || (in(t, k[0]) && !leaf && all_children(i)); break;
      case Op::Eventually: val = in(t, k[0]) || (!leaf && all_children(i)); break;
      case Op::Always: val = in(t, k[0]) && (leaf || some_child(i)); break;
      case Op::Prob:
        val = leaf ? pltlf::holds(g.comparison(), pltlf::Rational(0), g.bound())
                   : ((prob_pattern >> pj) & 1U) != 0;
        ++pj;
        break;
    }
    if (val) t |= Type{1} << i;
  }
  return t;
}

}  // namespace oracle
