#include "formula_family.hpp"

#include "pltlf/closure.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace oracle {

using pltlf::Comparison;
using pltlf::Formula;
using pltlf::Rational;

namespace {

Formula unary(int k, const Formula& f) {
  switch (k) {
    case 0: return Formula::negation(f);
    case 1: return Formula::next(f);
    case 2: return Formula::eventually(f);
    default: return Formula::always(f);
  }
}

Formula binary(int k, const Formula& l, const Formula& r) {
  switch (k) {
    case 0: return Formula::conjunction({l, r});
    case 1: return Formula::disjunction(l, r);
    case 2: return Formula::implication(l, r);
    default: return Formula::until(l, r);
  }
}

}  // namespace

std::size_t temporal_depth(const Formula& f) {
  std::size_t d = 0;
  for (const auto& c : f.children()) d = std::max(d, temporal_depth(c));
  switch (f.op()) {
    case pltlf::Op::Next:
    case pltlf::Op::Until:
    case pltlf::Op::Eventually:
    case pltlf::Op::Always:
    case pltlf::Op::Prob: return d + 1;
    default: return d;
  }
}

std::vector<Formula> ltlf_bodies(std::size_t max_size) {
  std::vector<std::vector<Formula>> by_size(max_size + 1);
  if (max_size >= 1) by_size[1] = {Formula::prop("a"), Formula::prop("b")};
  for (std::size_t s = 2; s <= max_size; ++s) {
    for (int k = 0; k < 4; ++k) {
      for (const auto& f : by_size[s - 1]) by_size[s].push_back(unary(k, f));
    }
    for (std::size_t l = 1; l + 1 < s; ++l) {
      for (int k = 0; k < 4; ++k) {
        for (const auto& x : by_size[l]) {
          for (const auto& y : by_size[s - 1 - l]) by_size[s].push_back(binary(k, x, y));
        }
      }
    }
  }
  std::vector<Formula> out;
  for (const auto& level : by_size) out.insert(out.end(), level.begin(), level.end());
  return out;
}

std::vector<Formula> sat_family(std::size_t max_closure, std::size_t max_depth) {
  const auto small = ltlf_bodies(2);
  const auto medium = ltlf_bodies(3);
  const Rational half(1, 2);
  std::vector<Formula> candidates = ltlf_bodies(4);
  for (const auto& b : small) {
    for (Comparison c : {Comparison::LE, Comparison::GE, Comparison::LT, Comparison::GT}) {
      for (const Rational& p : {Rational(0), half, Rational(1)}) {
        candidates.push_back(Formula::probability(c, p, b));
      }
    }
  }
  for (const auto& x : medium) {
    for (const auto& y : small) {
      for (Comparison c : {Comparison::LE, Comparison::GE}) {
        candidates.push_back(Formula::conjunction({x, Formula::probability(c, half, y)}));
      }
    }
  }
  for (int k = 0; k < 4; ++k) {
    for (const auto& b : medium) {
      for (Comparison c : {Comparison::LE, Comparison::GE}) {
        candidates.push_back(unary(k, Formula::probability(c, half, b)));
      }
    }
  }
  // Triples of temporal literals.
  std::vector<Formula> lits;
  for (const char* v : {"a", "b"}) {
    Formula p = Formula::prop(v);
    for (const Formula& x : {p, Formula::negation(p)}) {
      lits.push_back(Formula::next(x));
      lits.push_back(Formula::negation(Formula::next(x)));
      lits.push_back(Formula::eventually(x));
      lits.push_back(Formula::always(x));
    }
  }
  lits.push_back(Formula::next(Formula::top()));
  for (std::size_t i = 0; i < lits.size(); ++i) {
    for (std::size_t j = i + 1; j < lits.size(); ++j) {
      for (std::size_t k = j + 1; k < lits.size(); ++k) {
        candidates.push_back(Formula::conjunction({lits[i], lits[j], lits[k]}));
      }
    }
  }
  std::set<std::string> seen;
  std::vector<Formula> out;
  for (const auto& f : candidates) {
    if (temporal_depth(f) > max_depth) continue;
    Formula n = pltlf::normalize(f);
    if (!seen.insert(n.text()).second) continue;
    if (pltlf::ClosureSet(n).size() > max_closure) continue;
    out.push_back(f);
  }
  return out;
}

Formula random_formula(std::mt19937& rng, const std::vector<std::string>& vars, std::size_t depth,
                       bool with_probability) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  std::function<Formula(std::size_t)> gen = [&](std::size_t d) -> Formula {
    if (d == 0 || pick(4) == 0) {
      int k = pick(static_cast<int>(vars.size()) + 1);
      return k == static_cast<int>(vars.size()) ? Formula::top() : Formula::prop(vars[k]);
    }
    return pick(2) == 0 ? unary(pick(4), gen(d - 1)) : binary(pick(4), gen(d - 1), gen(d - 1));
  };
  if (!with_probability) return gen(depth);
  static const Comparison cmps[] = {Comparison::LE, Comparison::GE, Comparison::LT, Comparison::GT};
  static const Rational bounds[] = {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 5), Rational(1)};
  Formula p = Formula::probability(cmps[pick(4)], bounds[pick(5)], gen(depth > 0 ? depth - 1 : 0));
  switch (pick(4)) {
    case 0: return p;
    case 1: return Formula::conjunction({gen(depth > 0 ? depth - 1 : 0), p});
    case 2: return unary(pick(4), p);
    default: return Formula::disjunction(gen(depth > 0 ? depth - 1 : 0), p);
  }
}

}  // namespace oracle
