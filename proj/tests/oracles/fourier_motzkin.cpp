#include "fourier_motzkin.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace oracle {

namespace {

Row make(std::size_t n, const pltlf::LinearConstraint& c, int sign, bool strict) {
  Row r;
  r.a.assign(n, 0);
  for (const auto& [v, coef] : c.terms) r.a[v] = sign * coef;
  r.b = sign * c.bound;
  r.strict = strict;
  return r;
}

// Scale so the first nonzero coefficient is ±1; keeps duplicates detectable.
Row scaled(Row r) {
  for (const auto& x : r.a) {
    if (x == 0) continue;
    Rational s = abs(x);
    for (auto& y : r.a) y /= s;
    r.b /= s;
    break;
  }
  return r;
}

bool trivially_true(const Row& r) {
  if (std::any_of(r.a.begin(), r.a.end(), [](const Rational& x) { return x != 0; })) return false;
  return r.strict ? 0 < r.b : 0 <= r.b;
}

bool trivially_false(const Row& r) {
  if (std::any_of(r.a.begin(), r.a.end(), [](const Rational& x) { return x != 0; })) return false;
  return r.strict ? !(0 < r.b) : !(0 <= r.b);
}

struct RowLess {
  bool operator()(const Row& x, const Row& y) const {
    if (x.a != y.a) return x.a < y.a;
    if (x.b != y.b) return x.b < y.b;
    return x.strict < y.strict;
  }
};

}  // namespace

std::vector<Row> rows_of(const pltlf::LinearSystem& sys) {
  const std::size_t n = sys.variables().size();
  std::vector<Row> out;
  for (const auto& c : sys.constraints()) {
    switch (c.relation) {
      case pltlf::Relation::LE: out.push_back(make(n, c, 1, false)); break;
      case pltlf::Relation::LT: out.push_back(make(n, c, 1, true)); break;
      case pltlf::Relation::GE: out.push_back(make(n, c, -1, false)); break;
      case pltlf::Relation::GT: out.push_back(make(n, c, -1, true)); break;
      case pltlf::Relation::EQ:
        out.push_back(make(n, c, 1, false));
        out.push_back(make(n, c, -1, false));
        break;
    }
  }
  return out;
}

std::vector<Row> eliminate(const std::vector<Row>& rows, std::size_t v) {
  std::vector<Row> pos, neg;
  std::set<Row, RowLess> keep;
  for (const auto& r : rows) {
    if (r.a[v] > 0) {
      pos.push_back(r);
    } else if (r.a[v] < 0) {
      neg.push_back(r);
    } else if (!trivially_true(r)) {
      keep.insert(scaled(r));
    }
  }
  for (const auto& p : pos) {
    for (const auto& q : neg) {
      Row r;
      Rational sp = -q.a[v], sq = p.a[v];
      r.a.resize(p.a.size());
      for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = sp * p.a[i] + sq * q.a[i];
      r.a[v] = 0;
      r.b = sp * p.b + sq * q.b;
      r.strict = p.strict || q.strict;
      if (!trivially_true(r)) keep.insert(scaled(r));
    }
  }
  // Among parallel rows only the tightest one matters.
  std::map<std::vector<Rational>, Row> tightest;
  for (const auto& r : keep) {
    auto [it, fresh] = tightest.emplace(r.a, r);
    if (!fresh && (r.b < it->second.b || (r.b == it->second.b && r.strict))) it->second = r;
  }
  std::vector<Row> out;
  for (auto& [a, r] : tightest) out.push_back(std::move(r));
  return out;
}

bool fm_feasible(const pltlf::LinearSystem& sys) {
  auto rows = rows_of(sys);
  for (std::size_t v = 0; v < sys.variables().size(); ++v) rows = eliminate(rows, v);
  return std::none_of(rows.begin(), rows.end(), trivially_false);
}

std::optional<Bound> fm_supremum(const pltlf::LinearSystem& sys, std::size_t v) {
  auto rows = rows_of(sys);
  for (std::size_t u = 0; u < sys.variables().size(); ++u) {
    if (u != v) rows = eliminate(rows, u);
  }
  if (std::any_of(rows.begin(), rows.end(), trivially_false)) return std::nullopt;
  std::optional<Rational> lo, hi;
  bool lo_strict = false, hi_strict = false;
  for (const auto& r : rows) {
    const Rational& c = r.a[v];
    if (c == 0) continue;
    Rational t = r.b / c;
    if (c > 0) {
      if (!hi || t < *hi || (t == *hi && r.strict)) {
        if (!hi || t < *hi) hi_strict = false;
        hi = t;
        hi_strict = hi_strict || r.strict;
      }
    } else {
      if (!lo || t > *lo || (t == *lo && r.strict)) {
        if (!lo || t > *lo) lo_strict = false;
        lo = t;
        lo_strict = lo_strict || r.strict;
      }
    }
  }
  if (!hi) return std::nullopt;
  if (lo && (*lo > *hi || (*lo == *hi && (lo_strict || hi_strict)))) return std::nullopt;
  return Bound{*hi, !hi_strict};
}

}  // namespace oracle
