#include "pltlf/pltlf0.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace pltlf {

namespace {

constexpr std::size_t kMaxConstraints = 24;
constexpr std::size_t kMaxDistinct = 16;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

// Distinct normalized formulas and the group of every constraint.
std::vector<Formula> distinct_formulas(const Pltlf0Formula& phi, std::vector<std::size_t>& group) {
  std::vector<Formula> distinct;
  group.clear();
  for (const auto& c : phi.constraints) {
    Formula f = normalize(c.formula);
    auto it = std::find(distinct.begin(), distinct.end(), f);
    group.push_back(static_cast<std::size_t>(it - distinct.begin()));
    if (it == distinct.end()) distinct.push_back(f);
  }
  return distinct;
}

// Value over distinct groups, or nothing when two constraints on the same
// formula disagree.
std::optional<std::uint64_t> group_value(std::size_t index, const std::vector<std::size_t>& group) {
  const std::size_t n = group.size();
  std::uint64_t value = 0;
  std::uint64_t seen = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::uint64_t bit = std::uint64_t{1} << group[j];
    bool on = scenario_holds(index, n, j);
    if (seen & bit) {
      if (static_cast<bool>(value & bit) != on) return std::nullopt;
    } else {
      seen |= bit;
      if (on) value |= bit;
    }
  }
  return value;
}

template <typename F>
void parallel_for(std::size_t count, unsigned jobs, F&& body) {
  if (jobs <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned w = 0; w < std::min<std::size_t>(jobs, count); ++w) {
    workers.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

void Pltlf0Formula::validate() const {
  for (const auto& c : constraints) {
    if (c.formula.has_probability()) {
      throw std::invalid_argument("not an LTLf formula: " + c.formula.text());
    }
    if (!is_probability(c.bound)) {
      throw std::invalid_argument("probability " + to_compact_string(c.bound) + " outside [0,1]");
    }
  }
  if (!notes.empty() && notes.size() != constraints.size()) {
    throw std::invalid_argument("one note per constraint expected");
  }
}

Pltlf0Formula parse_pltlf0(std::string_view text) {
  Pltlf0Formula phi;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    std::string_view line = strip_comment(raw);
    std::string_view body = trim(line);
    if (body.empty()) continue;
    const std::size_t base = static_cast<std::size_t>(body.data() - raw.data());
    if (body.front() != 'P') throw ParseError("expected 'P<cmp><number> : <formula>'", line_no, base + 1);
    std::size_t pos = 1;
    Comparison cmp;
    if (body.substr(pos, 2) == "<=") {
      cmp = Comparison::LE;
      pos += 2;
    } else if (body.substr(pos, 2) == ">=") {
      cmp = Comparison::GE;
      pos += 2;
    } else if (body.substr(pos, 1) == "<") {
      cmp = Comparison::LT;
      pos += 1;
    } else if (body.substr(pos, 1) == ">") {
      cmp = Comparison::GT;
      pos += 1;
    } else {
      throw ParseError("expected a comparison after 'P'", line_no, base + pos + 1);
    }
    auto colon = body.find(':', pos);
    if (colon == std::string_view::npos) throw ParseError("missing ':'", line_no, base + body.size() + 1);
    Rational bound;
    try {
      bound = parse_rational(trim(body.substr(pos, colon - pos)));
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), line_no, base + pos + 1);
    }
    if (!is_probability(bound)) {
      throw ParseError("probability " + to_compact_string(bound) + " outside [0,1]", line_no, base + pos + 1);
    }
    std::string_view ftext = body.substr(colon + 1);
    Formula f;
    try {
      f = parse_formula(ftext);
    } catch (const ParseError& e) {
      std::size_t col = e.line() == 1 ? base + colon + 1 + e.column() : e.column();
      throw ParseError(e.message(), line_no, col);
    }
    if (f.has_probability()) {
      throw ParseError("constraint formulas may not use P", line_no, base + colon + 2);
    }
    phi.constraints.push_back({cmp, bound, f});
  }
  return phi;
}

Pltlf0Formula load_pltlf0(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_pltlf0(ss.str());
}

std::string format_pltlf0(const Pltlf0Formula& phi) {
  std::string out;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const auto& c = phi.constraints[j];
    if (!phi.notes.empty() && !phi.notes[j].empty()) out += "# " + phi.notes[j] + "\n";
    out += "P" + std::string(symbol(c.cmp)) + to_display_string(c.bound) + " : " + c.formula.text() + "\n";
  }
  return out;
}

std::string scenario_name(std::size_t index, std::size_t n) {
  std::string s(n, '0');
  for (std::size_t j = 0; j < n; ++j) {
    if (scenario_holds(index, n, j)) s[j] = '1';
  }
  return s;
}

bool scenario_holds(std::size_t index, std::size_t n, std::size_t j) {
  return (index >> (n - 1 - j)) & 1U;
}

std::vector<Formula> scenario_formulas(const Pltlf0Formula& phi, std::size_t index) {
  std::vector<Formula> out;
  for (std::size_t j = 0; j < phi.size(); ++j) {
    const Formula& f = phi.constraints[j].formula;
    out.push_back(scenario_holds(index, phi.size(), j) ? f : Formula::negation(f));
  }
  return out;
}

std::string scenario_description(const Pltlf0Formula& phi, std::size_t index) {
  std::string out = "{";
  auto fs = scenario_formulas(phi, index);
  for (std::size_t j = 0; j < fs.size(); ++j) {
    if (j) out += ", ";
    out += fs[j].text();
  }
  return out + "}";
}

// ---------------------------------------------------------------------------

namespace {

bool holds_in(const ClosureSet& c, const Atom& a, const Formula& f) {
  if (auto i = c.find(f)) return a.contains(*i);
  switch (f.op()) {
    case Op::True: return true;
    case Op::Not: return !holds_in(c, a, f[0]);
    case Op::And:
      return std::all_of(f.children().begin(), f.children().end(),
                         [&](const Formula& g) { return holds_in(c, a, g); });
    default:
      throw std::logic_error("formula outside the closure: " + f.text());
  }
}

}  // namespace

PrefixAutomaton::PrefixAutomaton(std::vector<Formula> tracked) {
  if (tracked.size() > 64) throw std::length_error("too many tracked formulas");
  for (auto& f : tracked) {
    if (f.has_probability()) throw std::invalid_argument("not an LTLf formula: " + f.text());
    tracked_.push_back(normalize(f));
  }
  TreeAutomaton reduced = TreeAutomaton(Formula::conjunction(tracked_), Branching::OnePerMember).reduce();
  const ClosureSet& c = reduced.closure();
  variables_ = c.variables();
  const auto& nexts = c.nexts();
  for (std::size_t s : reduced.states()) {
    const Atom& a = reduced.state(s);
    std::uint64_t pattern = 0;
    for (std::size_t j = 0; j < tracked_.size(); ++j) {
      if (holds_in(c, a, tracked_[j])) pattern |= std::uint64_t{1} << j;
    }
    std::uint64_t next_key = 0;
    std::uint64_t arg_key = 0;
    for (std::size_t k = 0; k < nexts.size(); ++k) {
      if (a.contains(nexts[k])) next_key |= std::uint64_t{1} << k;
      if (a.contains(c.index_of(c[nexts[k]][0]))) arg_key |= std::uint64_t{1} << k;
    }
    by_arg_key_[arg_key].push_back(labels_.size());
    labels_.push_back(a.valuation());
    pattern_.push_back(pattern);
    next_key_.push_back(next_key);
  }
}

bool PrefixAutomaton::realizable(std::uint64_t mask, std::uint64_t value) const {
  return std::any_of(pattern_.begin(), pattern_.end(),
                     [&](std::uint64_t p) { return (p & mask) == value; });
}

std::vector<std::size_t> PrefixAutomaton::start(std::uint64_t mask, std::uint64_t value,
                                                const Valuation& v) const {
  Valuation pv = project(v, variables_);
  std::vector<std::size_t> out;
  for (std::size_t a = 0; a < labels_.size(); ++a) {
    if ((pattern_[a] & mask) == value && labels_[a] == pv) out.push_back(a);
  }
  return out;
}

std::vector<std::size_t> PrefixAutomaton::step(const std::vector<std::size_t>& frontier,
                                               const Valuation& v) const {
  Valuation pv = project(v, variables_);
  std::vector<std::size_t> out;
  for (std::size_t a : frontier) {
    auto it = by_arg_key_.find(next_key_[a]);
    if (it == by_arg_key_.end()) continue;
    for (std::size_t b : it->second) {
      if (labels_[b] == pv) out.push_back(b);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool PrefixAutomaton::accepts(std::uint64_t mask, std::uint64_t value, const Trace& t) const {
  if (t.empty()) return realizable(mask, value);
  auto frontier = start(mask, value, t.front());
  for (std::size_t i = 1; i < t.size() && !frontier.empty(); ++i) frontier = step(frontier, t[i]);
  return !frontier.empty();
}

// ---------------------------------------------------------------------------

namespace {

struct Compact {
  LinearSystem system;
  std::vector<std::size_t> live;  // scenario index of every variable
};

Compact compact_system(const Pltlf0Formula& phi, const std::vector<char>& sat) {
  Compact out;
  const std::size_t n = phi.size();
  for (std::size_t i = 0; i < sat.size(); ++i) {
    if (sat[i]) {
      out.system.add_variable("x" + scenario_name(i, n));
      out.live.push_back(i);
    }
  }
  for (std::size_t k = 0; k < out.live.size(); ++k) out.system.add({{k, Rational(1)}}, Relation::GE, 0);
  std::vector<Term> sum;
  for (std::size_t k = 0; k < out.live.size(); ++k) sum.emplace_back(k, 1);
  out.system.add(std::move(sum), Relation::EQ, 1);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Term> row;
    for (std::size_t k = 0; k < out.live.size(); ++k) {
      if (scenario_holds(out.live[k], n, j)) row.emplace_back(k, 1);
    }
    out.system.add(std::move(row), relation_of(phi.constraints[j].cmp), phi.constraints[j].bound);
  }
  return out;
}

}  // namespace

ScenarioTable build_lphi(const Pltlf0Formula& phi) {
  phi.validate();
  const std::size_t n = phi.size();
  if (n > kMaxConstraints) {
    throw std::length_error(std::to_string(n) + " constraints; at most " +
                            std::to_string(kMaxConstraints) + " are supported");
  }
  std::vector<std::size_t> group;
  auto distinct = distinct_formulas(phi, group);
  if (distinct.size() > kMaxDistinct) {
    throw std::length_error(std::to_string(distinct.size()) + " distinct formulas; at most " +
                            std::to_string(kMaxDistinct) + " are supported");
  }
  PrefixAutomaton automaton(distinct);
  const std::uint64_t mask = distinct.empty() ? 0 : (std::uint64_t{1} << distinct.size()) - 1;

  ScenarioTable table;
  table.n = n;
  const std::size_t count = std::size_t{1} << n;
  table.satisfiable.assign(count, 0);
  std::map<std::uint64_t, bool> memo;
  for (std::size_t i = 0; i < count; ++i) {
    auto value = group_value(i, group);
    if (!value) continue;
    auto it = memo.find(*value);
    if (it == memo.end()) it = memo.emplace(*value, automaton.realizable(mask, *value)).first;
    table.satisfiable[i] = it->second;
  }

  for (std::size_t i = 0; i < count; ++i) table.system.add_variable("x" + scenario_name(i, n));
  for (std::size_t i = 0; i < count; ++i) {
    table.system.add({{i, Rational(1)}}, table.satisfiable[i] ? Relation::GE : Relation::EQ, 0);
  }
  std::vector<Term> sum;
  for (std::size_t i = 0; i < count; ++i) sum.emplace_back(i, 1);
  table.system.add(std::move(sum), Relation::EQ, 1);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Term> row;
    for (std::size_t i = 0; i < count; ++i) {
      if (scenario_holds(i, n, j)) row.emplace_back(i, 1);
    }
    table.system.add(std::move(row), relation_of(phi.constraints[j].cmp), phi.constraints[j].bound);
  }

  Compact compact = compact_system(phi, table.satisfiable);
  auto r = solve_feasibility(compact.system);
  table.feasible = r.feasible;
  if (r.feasible) {
    table.witness.assign(count, Rational(0));
    for (std::size_t k = 0; k < compact.live.size(); ++k) table.witness[compact.live[k]] = r.witness[k];
  }
  return table;
}

bool is_satisfiable0(const Pltlf0Formula& phi) { return build_lphi(phi).feasible; }

ScenarioTable scenario_maxima(const Pltlf0Formula& phi, unsigned jobs) {
  ScenarioTable table = build_lphi(phi);
  if (!table.feasible) throw InfeasibleSystem("the PLTLf0 formula is unsatisfiable");
  Compact compact = compact_system(phi, table.satisfiable);
  table.maxima.assign(table.count(), Rational(0));
  table.attained.assign(table.count(), 1);
  parallel_for(compact.live.size(), jobs, [&](std::size_t k) {
    Optimum o = maximize(compact.system, k, false);
    table.maxima[compact.live[k]] = o.supremum;
    table.attained[compact.live[k]] = o.attained;
  });
  return table;
}

long most_likely_index(const ScenarioTable& table, const std::vector<char>& accepting) {
  long mls = -1;
  Rational best = 0;
  for (std::size_t i = 0; i < table.count(); ++i) {
    if (table.maxima[i] == 0) continue;
    if (accepting[i] && table.maxima[i] > best) {
      mls = static_cast<long>(i);
      best = table.maxima[i];
    }
  }
  return mls;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Formula> monitor_formulas(const Pltlf0Formula& phi, const std::optional<Formula>& property,
                                      std::vector<std::size_t>& group) {
  auto distinct = distinct_formulas(phi, group);
  if (property) distinct.push_back(*property);
  return distinct;
}

}  // namespace

MonitorContext::MonitorContext(Pltlf0Formula phi_, ScenarioTable table_, std::optional<Formula> property_)
    : phi(std::move(phi_)),
      table(std::move(table_)),
      property(std::move(property_)),
      automaton(monitor_formulas(phi, property, group)) {
  mask = automaton.tracked() == 0 ? 0 : (std::uint64_t{1} << automaton.tracked()) - 1;
}

std::uint64_t MonitorContext::pattern(std::size_t index) const {
  std::uint64_t value = group_value(index, group).value_or(0);
  if (property) value |= std::uint64_t{1} << (automaton.tracked() - 1);
  return value;
}

MonitorState MonitorState::start(const Pltlf0Formula& phi, std::optional<Formula> property, unsigned jobs) {
  if (property && property->has_probability()) {
    throw std::invalid_argument("the monitored property must be an LTLf formula");
  }
  ScenarioTable table = scenario_maxima(phi, jobs);
  return MonitorState(std::make_shared<const MonitorContext>(phi, std::move(table), std::move(property)));
}

MonitorState::MonitorState(std::shared_ptr<const MonitorContext> ctx) : ctx_(std::move(ctx)) {
  for (std::size_t i = 0; i < ctx_->table.count(); ++i) {
    if (!ctx_->table.satisfiable[i]) continue;
    if (ctx_->automaton.realizable(ctx_->mask, ctx_->pattern(i))) alive_.push_back({i, {}});
  }
  refresh();
}

MonitorState MonitorState::step(const Valuation& v) const {
  MonitorState next = *this;
  next.alive_.clear();
  for (const auto& e : alive_) {
    auto frontier = prefix_.empty() ? ctx_->automaton.start(ctx_->mask, ctx_->pattern(e.index), v)
                                    : ctx_->automaton.step(e.frontier, v);
    if (!frontier.empty()) next.alive_.push_back({e.index, std::move(frontier)});
  }
  next.prefix_.push_back(v);
  next.refresh();
  return next;
}

void MonitorState::refresh() {
  std::vector<char> accepting(ctx_->table.count(), 0);
  for (const auto& e : alive_) accepting[e.index] = 1;
  best_ = most_likely_index(ctx_->table, accepting);
}

std::vector<std::size_t> MonitorState::alive() const {
  std::vector<std::size_t> out;
  for (const auto& e : alive_) out.push_back(e.index);
  return out;
}

Rational MonitorState::probability() const {
  if (best_ < 0) return 0;
  return ctx_->table.maxima[static_cast<std::size_t>(best_)];
}

long most_likely_scenario(const Pltlf0Formula& phi, const Trace& t) {
  auto m = MonitorState::start(phi);
  for (const auto& v : t) m = m.step(v);
  return m.best();
}

long monitor_with_property(const Pltlf0Formula& phi, const Formula& psi, const Trace& t) {
  auto m = MonitorState::start(phi, psi);
  for (const auto& v : t) m = m.step(v);
  return m.best();
}

bool accepts_prefix(const Pltlf0Formula& phi, std::size_t index, const Trace& t) {
  phi.validate();
  std::vector<std::size_t> group;
  auto distinct = distinct_formulas(phi, group);
  auto value = group_value(index, group);
  if (!value) return false;
  PrefixAutomaton automaton(distinct);
  const std::uint64_t mask = distinct.empty() ? 0 : (std::uint64_t{1} << distinct.size()) - 1;
  return automaton.accepts(mask, *value, t);
}

Formula to_pltlf(const Pltlf0Formula& phi) {
  std::vector<Formula> parts;
  for (const auto& c : phi.constraints) parts.push_back(Formula::probability(c.cmp, c.bound, c.formula));
  return Formula::conjunction(std::move(parts));
}

}  // namespace pltlf
