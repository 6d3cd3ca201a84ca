#include "pltlf/linear.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace pltlf {

Relation relation_of(Comparison c) {
  switch (c) {
    case Comparison::LE: return Relation::LE;
    case Comparison::GE: return Relation::GE;
    case Comparison::LT: return Relation::LT;
    case Comparison::GT: return Relation::GT;
  }
  return Relation::EQ;
}

std::string_view symbol(Relation r) {
  switch (r) {
    case Relation::LE: return "<=";
    case Relation::GE: return ">=";
    case Relation::LT: return "<";
    case Relation::GT: return ">";
    case Relation::EQ: return "=";
  }
  return "?";
}

bool is_strict(Relation r) { return r == Relation::LT || r == Relation::GT; }

bool holds(Relation r, const Rational& lhs, const Rational& rhs) {
  switch (r) {
    case Relation::LE: return lhs <= rhs;
    case Relation::GE: return lhs >= rhs;
    case Relation::LT: return lhs < rhs;
    case Relation::GT: return lhs > rhs;
    case Relation::EQ: return lhs == rhs;
  }
  return false;
}

std::size_t LinearSystem::add_variable(std::string name) {
  if (find_variable(name)) throw std::invalid_argument("duplicate variable " + name);
  variables_.push_back(std::move(name));
  return variables_.size() - 1;
}

std::optional<std::size_t> LinearSystem::find_variable(std::string_view name) const {
  auto it = std::find(variables_.begin(), variables_.end(), name);
  if (it == variables_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - variables_.begin());
}

std::size_t LinearSystem::variable(std::string_view name) const {
  auto i = find_variable(name);
  if (!i) throw std::out_of_range("unknown variable " + std::string(name));
  return *i;
}

void LinearSystem::add(std::vector<Term> terms, Relation relation, Rational bound) {
  std::map<std::size_t, Rational> merged;
  for (auto& [var, coeff] : terms) {
    if (var >= variables_.size()) throw std::out_of_range("constraint on undeclared variable");
    merged[var] += coeff;
  }
  LinearConstraint row;
  for (auto& [var, coeff] : merged) {
    if (coeff != 0) row.terms.emplace_back(var, coeff);
  }
  row.relation = relation;
  row.bound = std::move(bound);
  constraints_.push_back(std::move(row));
}

bool LinearSystem::has_strict() const {
  return std::any_of(constraints_.begin(), constraints_.end(),
                     [](const LinearConstraint& c) { return is_strict(c.relation); });
}

bool LinearSystem::satisfied_by(const std::vector<Rational>& point) const {
  if (point.size() != variables_.size()) return false;
  for (const auto& row : constraints_) {
    Rational lhs = 0;
    for (const auto& [var, coeff] : row.terms) lhs += coeff * point[var];
    if (!holds(row.relation, lhs, row.bound)) return false;
  }
  return true;
}

std::string LinearSystem::to_string() const {
  std::vector<std::string> lhs;
  std::size_t width = 0;
  for (const auto& row : constraints_) {
    std::string s;
    for (const auto& [var, coeff] : row.terms) {
      Rational mag = abs(coeff);
      if (s.empty()) {
        if (coeff < 0) s += "-";
      } else {
        s += coeff < 0 ? " - " : " + ";
      }
      if (mag != 1) s += to_display_string(mag) + " ";
      s += variables_[var];
    }
    if (s.empty()) s = "0";
    width = std::max(width, s.size());
    lhs.push_back(std::move(s));
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < constraints_.size(); ++i) {
    const auto& row = constraints_[i];
    out << lhs[i] << std::string(width - lhs[i].size(), ' ') << ' ' << symbol(row.relation)
        << ' ' << to_display_string(row.bound) << '\n';
  }
  return out.str();
}

namespace {

struct LpOutcome {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  Rational value;
  std::vector<Rational> point;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : cols_(cols), a_(rows, std::vector<Rational>(cols + 1)), z_(cols + 1), basis_(rows) {}

  Rational& at(std::size_t r, std::size_t c) { return a_[r][c]; }
  Rational& rhs(std::size_t r) { return a_[r][cols_]; }
  std::size_t rows() const { return a_.size(); }
  std::size_t& basis(std::size_t r) { return basis_[r]; }

  void pivot(std::size_t r, std::size_t c) {
    Rational p = a_[r][c];
    for (auto& v : a_[r]) v /= p;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (i != r) eliminate(a_[i], r, c);
    }
    eliminate(z_, r, c);
    basis_[r] = c;
  }

  /// Objective row for maximizing Σ cost_j · column_j.
  void set_objective(const std::vector<Rational>& cost) {
    for (std::size_t j = 0; j <= cols_; ++j) z_[j] = j < cost.size() ? Rational(-cost[j]) : 0;
    for (std::size_t r = 0; r < a_.size(); ++r) {
      if (z_[basis_[r]] != 0) eliminate(z_, r, basis_[r]);
    }
  }

  const Rational& value() const { return z_[cols_]; }

  /// Bland's rule. Returns false when the objective is unbounded.
  bool optimize(const std::vector<char>& allowed) {
    while (true) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < cols_; ++j) {
        if (allowed[j] && z_[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return true;
      std::size_t leave = a_.size();
      Rational best;
      for (std::size_t r = 0; r < a_.size(); ++r) {
        if (a_[r][enter] <= 0) continue;
        Rational ratio = a_[r][cols_] / a_[r][enter];
        if (leave == a_.size() || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == a_.size()) return false;
      pivot(leave, enter);
    }
  }

  void drop_row(std::size_t r) {
    a_.erase(a_.begin() + static_cast<std::ptrdiff_t>(r));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
  }

  std::vector<Rational> column_values() const {
    std::vector<Rational> out(cols_);
    for (std::size_t r = 0; r < a_.size(); ++r) out[basis_[r]] = a_[r][cols_];
    return out;
  }

 private:
  void eliminate(std::vector<Rational>& row, std::size_t r, std::size_t c) {
    if (row[c] == 0) return;
    Rational f = row[c];
    const auto& src = a_[r];
    for (std::size_t j = 0; j <= cols_; ++j) {
      if (src[j] != 0) row[j] -= f * src[j];
    }
  }

  std::size_t cols_;
  std::vector<std::vector<Rational>> a_;
  std::vector<Rational> z_;
  std::vector<std::size_t> basis_;
};

// Maximizes objective·x over non-strict rows.
LpOutcome solve_lp(std::vector<LinearConstraint> rows, std::size_t nvars,
                   const std::vector<Rational>& objective) {
  LpOutcome out;
  std::vector<std::optional<Rational>> fixed(nvars);

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& row : rows) {
      if (row.relation != Relation::EQ || row.terms.size() != 1) continue;
      auto [var, coeff] = row.terms.front();
      Rational val = row.bound / coeff;
      fixed[var] = val;
      for (auto& other : rows) {
        auto it = std::find_if(other.terms.begin(), other.terms.end(),
                               [v = var](const Term& t) { return t.first == v; });
        if (it == other.terms.end()) continue;
        other.bound -= it->second * val;
        other.terms.erase(it);
      }
      changed = true;
      break;
    }
  }

  std::vector<char> nonneg(nvars, 0);
  std::vector<LinearConstraint> kept;
  for (auto& row : rows) {
    if (row.terms.empty()) {
      if (!holds(row.relation, 0, row.bound)) return out;
      continue;
    }
    if (row.terms.size() == 1) {
      const auto& [var, coeff] = row.terms.front();
      bool lower = (coeff > 0 && row.relation == Relation::GE && row.bound >= 0) ||
                   (coeff < 0 && row.relation == Relation::LE && row.bound <= 0);
      if (lower) {
        nonneg[var] = 1;
        if (row.bound == 0) continue;
      }
    }
    kept.push_back(std::move(row));
  }

  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> pos(nvars, none), neg(nvars, none);
  std::size_t cols = 0;
  for (std::size_t v = 0; v < nvars; ++v) {
    if (fixed[v]) continue;
    pos[v] = cols++;
    if (!nonneg[v]) neg[v] = cols++;
  }
  std::vector<std::size_t> slack(kept.size(), none);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    if (kept[r].relation != Relation::EQ) slack[r] = cols++;
  }
  std::vector<char> needs_artificial(kept.size(), 0);
  std::vector<Rational> sign(kept.size(), 1);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    if (kept[r].bound < 0) sign[r] = -1;
    // After scaling by sign the slack coefficient is +1 only for these cases.
    Rational slack_coeff = kept[r].relation == Relation::LE ? 1 : -1;
    needs_artificial[r] = slack[r] == none || slack_coeff * sign[r] != 1;
  }
  const std::size_t first_artificial = cols;
  for (std::size_t r = 0; r < kept.size(); ++r) {
    if (needs_artificial[r]) ++cols;
  }

  Tableau t(kept.size(), cols);
  std::size_t art = first_artificial;
  std::vector<Rational> phase1(cols);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const auto& row = kept[r];
    for (const auto& [var, coeff] : row.terms) {
      t.at(r, pos[var]) += sign[r] * coeff;
      if (neg[var] != none) t.at(r, neg[var]) -= sign[r] * coeff;
    }
    if (slack[r] != none) t.at(r, slack[r]) = sign[r] * (row.relation == Relation::LE ? 1 : -1);
    t.rhs(r) = sign[r] * row.bound;
    if (needs_artificial[r]) {
      t.at(r, art) = 1;
      t.basis(r) = art;
      phase1[art] = -1;
      ++art;
    } else {
      t.basis(r) = slack[r];
    }
  }

  std::vector<char> allowed(cols, 1);
  if (art > first_artificial) {
    t.set_objective(phase1);
    t.optimize(allowed);
    if (t.value() < 0) return out;
    for (std::size_t r = t.rows(); r-- > 0;) {
      if (t.basis(r) < first_artificial) continue;
      std::size_t enter = none;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (t.at(r, j) != 0) {
          enter = j;
          break;
        }
      }
      if (enter == none) {
        t.drop_row(r);
      } else {
        t.pivot(r, enter);
      }
    }
    for (std::size_t j = first_artificial; j < cols; ++j) allowed[j] = 0;
  }

  std::vector<Rational> cost(cols);
  Rational offset = 0;
  for (std::size_t v = 0; v < nvars; ++v) {
    if (objective[v] == 0) continue;
    if (fixed[v]) {
      offset += objective[v] * *fixed[v];
      continue;
    }
    cost[pos[v]] = objective[v];
    if (neg[v] != none) cost[neg[v]] = -objective[v];
  }
  t.set_objective(cost);
  if (!t.optimize(allowed)) {
    out.status = LpOutcome::Status::Unbounded;
    return out;
  }
  auto values = t.column_values();
  out.point.resize(nvars);
  for (std::size_t v = 0; v < nvars; ++v) {
    if (fixed[v]) {
      out.point[v] = *fixed[v];
    } else {
      out.point[v] = values[pos[v]];
      if (neg[v] != none) out.point[v] -= values[neg[v]];
    }
  }
  out.value = t.value() + offset;
  out.status = LpOutcome::Status::Optimal;
  return out;
}

std::vector<LinearConstraint> relaxed(const LinearSystem& sys) {
  auto rows = sys.constraints();
  for (auto& row : rows) {
    if (row.relation == Relation::LT) row.relation = Relation::LE;
    if (row.relation == Relation::GT) row.relation = Relation::GE;
  }
  return rows;
}

Optimum lex_min_optimum(const LinearSystem& sys, std::size_t var, const LpOutcome& best) {
  const std::size_t n = sys.variables().size();
  auto rows = relaxed(sys);
  rows.push_back({{{var, Rational(1)}}, Relation::EQ, best.value});
  std::vector<Rational> point = best.point;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Rational> objective(n);
    objective[j] = -1;
    auto r = solve_lp(rows, n, objective);
    if (r.status != LpOutcome::Status::Optimal) break;
    point = r.point;
    rows.push_back({{{j, Rational(1)}}, Relation::EQ, point[j]});
  }
  return Optimum{best.value, true, point};
}

}  // namespace

FeasibilityResult solve_feasibility(const LinearSystem& sys) {
  const std::size_t n = sys.variables().size();
  FeasibilityResult result;
  if (!sys.has_strict()) {
    auto r = solve_lp(sys.constraints(), n, std::vector<Rational>(n));
    if (r.status != LpOutcome::Status::Optimal) return result;
    result.feasible = true;
    result.witness = std::move(r.point);
    return result;
  }
  const std::size_t eps = n;
  auto rows = sys.constraints();
  for (auto& row : rows) {
    if (row.relation == Relation::LT) {
      row.terms.emplace_back(eps, 1);
      row.relation = Relation::LE;
    } else if (row.relation == Relation::GT) {
      row.terms.emplace_back(eps, -1);
      row.relation = Relation::GE;
    }
  }
  rows.push_back({{{eps, Rational(1)}}, Relation::GE, 0});
  rows.push_back({{{eps, Rational(1)}}, Relation::LE, 1});
  std::vector<Rational> objective(n + 1);
  objective[eps] = 1;
  auto r = solve_lp(std::move(rows), n + 1, objective);
  if (r.status != LpOutcome::Status::Optimal || r.value <= 0) return result;
  result.feasible = true;
  result.witness.assign(r.point.begin(), r.point.begin() + static_cast<std::ptrdiff_t>(n));
  return result;
}

Optimum maximize(const LinearSystem& sys, std::size_t var, bool want_witness) {
  const std::size_t n = sys.variables().size();
  if (var >= n) throw std::out_of_range("objective variable out of range");
  if (!solve_feasibility(sys).feasible) throw InfeasibleSystem();
  std::vector<Rational> objective(n);
  objective[var] = 1;
  auto best = solve_lp(relaxed(sys), n, objective);
  if (best.status == LpOutcome::Status::Unbounded) throw UnboundedObjective(sys.variables()[var]);
  if (best.status != LpOutcome::Status::Optimal) throw InfeasibleSystem();

  if (!sys.has_strict()) {
    if (!want_witness) return Optimum{best.value, true, std::nullopt};
    return lex_min_optimum(sys, var, best);
  }
  LinearSystem pinned = sys;
  pinned.add({{var, Rational(1)}}, Relation::EQ, best.value);
  auto at_sup = solve_feasibility(pinned);
  Optimum out{best.value, at_sup.feasible, std::nullopt};
  if (at_sup.feasible && want_witness) out.witness = std::move(at_sup.witness);
  return out;
}

Optimum maximize(const LinearSystem& sys, std::string_view var, bool want_witness) {
  return maximize(sys, sys.variable(var), want_witness);
}

}  // namespace pltlf
