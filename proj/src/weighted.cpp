#include "pltlf/weighted.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

namespace pltlf {

Rational WeightedAutomaton::weight(std::size_t from, std::size_t to) const {
  const auto& edges = out.at(from);
  auto it = std::lower_bound(edges.begin(), edges.end(), to,
                             [](const auto& e, std::size_t t) { return e.first < t; });
  if (it == edges.end() || it->first != to) return 0;
  return it->second;
}

std::optional<std::size_t> WeightedAutomaton::find_origin(std::size_t s) const {
  auto it = std::find(origin.begin(), origin.end(), s);
  if (it == origin.end()) return std::nullopt;
  return static_cast<std::size_t>(it - origin.begin());
}

WeightedAutomaton build_weighted(const TreeAutomaton& reduced) {
  if (!reduced.is_reduced()) throw std::invalid_argument("build_weighted expects a reduced automaton");
  const auto& c = reduced.closure();
  WeightedAutomaton b;
  b.variables = c.variables();
  std::vector<std::size_t> states = reduced.states();
  std::map<std::size_t, std::size_t> index;
  for (std::size_t s : states) {
    index.emplace(s, b.size());
    b.labels.push_back(reduced.state(s).valuation());
    b.in.emplace_back(reduced.is_initial(s) ? 1 : 0);
    b.final.push_back(reduced.is_final(s));
    b.origin.push_back(s);
  }
  b.out.resize(b.size());

  std::map<std::tuple<std::vector<std::size_t>, std::vector<QMask>, std::size_t>, Rational> memo;
  for (std::size_t s : states) {
    const auto& prob = reduced.state(s).probabilistic();
    std::map<std::size_t, Rational> best;
    for (const auto& S : reduced.scenarios(s)) {
      for (std::size_t p = 0; p < S.members.size(); ++p) {
        auto kids = reduced.completable_children(s, S, p);
        if (kids.empty()) continue;
        auto key = std::make_tuple(prob, S.members, p);
        auto it = memo.find(key);
        if (it == memo.end()) {
          Rational m = maximize(build_system(c, prob, S.members), p, false).supremum;
          it = memo.emplace(std::move(key), m).first;
        }
        for (std::size_t k : kids) {
          auto [bit, inserted] = best.emplace(k, it->second);
          if (!inserted && bit->second < it->second) bit->second = it->second;
        }
      }
    }
    auto& edges = b.out[index.at(s)];
    for (const auto& [k, w] : best) {
      if (w > 0) edges.emplace_back(index.at(k), w);
    }
    std::sort(edges.begin(), edges.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
  }
  return b;
}

std::vector<Rational> behaviour_step(const WeightedAutomaton& b, const std::vector<Rational>& w) {
  std::vector<Rational> next(b.size());
  for (std::size_t q = 0; q < b.size(); ++q) {
    Rational v = b.final[q] ? 1 : 0;
    for (const auto& [t, wt] : b.out[q]) {
      Rational cand = wt * w[t];
      if (cand > v) v = cand;
    }
    next[q] = v;
  }
  return next;
}

BehaviourTable behaviour_table(const WeightedAutomaton& b) {
  BehaviourTable table;
  table.w.resize(b.size());
  for (std::size_t q = 0; q < b.size(); ++q) table.w[q] = b.final[q] ? 1 : 0;
  for (;;) {
    auto next = behaviour_step(b, table.w);
    if (next == table.w) break;
    table.w = std::move(next);
    ++table.iterations;
  }
  return table;
}

Rational behaviour(const WeightedAutomaton& b, const BehaviourTable& table) {
  Rational best = 0;
  for (std::size_t q = 0; q < b.size(); ++q) {
    Rational v = b.in[q] * table.w[q];
    if (v > best) best = v;
  }
  return best;
}

Rational behaviour(const WeightedAutomaton& b) { return behaviour(b, behaviour_table(b)); }

MltAcceptor mlt_acceptor(const WeightedAutomaton& b, const BehaviourTable& table) {
  MltAcceptor acc;
  acc.value = behaviour(b, table);
  acc.labels = b.labels;
  acc.final = b.final;
  acc.next.resize(b.size());
  if (acc.value == 0) return acc;
  for (std::size_t q = 0; q < b.size(); ++q) {
    if (b.in[q] * table.w[q] == acc.value) acc.initial.push_back(q);
    for (const auto& [t, wt] : b.out[q]) {
      if (wt * table.w[t] == table.w[q]) acc.next[q].push_back(t);
    }
  }
  return acc;
}

bool MltAcceptor::accepts(const Trace& t) const {
  if (t.empty()) return false;
  std::vector<std::size_t> cur;
  for (std::size_t q : initial) {
    if (labels[q] == t[0]) cur.push_back(q);
  }
  for (std::size_t i = 1; i < t.size() && !cur.empty(); ++i) {
    std::vector<std::size_t> nxt;
    for (std::size_t q : cur) {
      for (std::size_t r : next[q]) {
        if (labels[r] == t[i]) nxt.push_back(r);
      }
    }
    std::sort(nxt.begin(), nxt.end());
    nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
    cur = std::move(nxt);
  }
  return std::any_of(cur.begin(), cur.end(), [&](std::size_t q) { return final[q] != 0; });
}

std::vector<Trace> enumerate_mlts(const MltAcceptor& acc, std::size_t max_count,
                                  std::size_t max_len) {
  if (max_count == 0 || max_len == 0) {
    throw std::invalid_argument("enumerate_mlts needs positive count and length bounds");
  }
  std::vector<Trace> out;
  const std::size_t n = acc.labels.size();
  // finish[k][q]: a final state is reachable from q in exactly k steps
  std::vector<std::vector<char>> finish(1, std::vector<char>(acc.final.begin(), acc.final.end()));
  std::vector<std::string> enc(n);
  for (std::size_t q = 0; q < n; ++q) enc[q] = format_valuation(acc.labels[q]);

  for (std::size_t len = 1; len <= max_len && out.size() < max_count; ++len) {
    while (finish.size() < len) {
      const auto& prev = finish.back();
      std::vector<char> cur(n, 0);
      for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t r : acc.next[q]) {
          if (prev[r]) {
            cur[q] = 1;
            break;
          }
        }
      }
      finish.push_back(std::move(cur));
    }
    Trace trace;
    std::function<void(const std::vector<std::size_t>&)> rec = [&](const std::vector<std::size_t>& set) {
      if (out.size() >= max_count) return;
      const std::size_t remaining = len - trace.size();
      std::map<std::string, std::vector<std::size_t>> groups;
      for (std::size_t q : set) {
        if (finish[remaining - 1][q]) groups[enc[q]].push_back(q);
      }
      for (auto& [label, states] : groups) {
        if (out.size() >= max_count) return;
        trace.push_back(acc.labels[states.front()]);
        if (remaining == 1) {
          out.push_back(trace);
        } else {
          std::vector<std::size_t> nxt;
          for (std::size_t q : states) nxt.insert(nxt.end(), acc.next[q].begin(), acc.next[q].end());
          std::sort(nxt.begin(), nxt.end());
          nxt.erase(std::unique(nxt.begin(), nxt.end()), nxt.end());
          rec(nxt);
        }
        trace.pop_back();
      }
    };
    rec(acc.initial);
  }
  return out;
}

// ---------------------------------------------------------------------------

TraceNFA TraceNFA::universal() {
  TraceNFA a;
  a.states = 1;
  a.initial = {0};
  a.finals = {0};
  a.transitions.push_back({0, "*", 0});
  return a;
}

TraceNFA TraceNFA::single(const Trace& t) {
  if (t.empty()) throw std::invalid_argument("a trace needs at least one step");
  TraceNFA a;
  a.states = t.size() + 1;
  a.initial = {0};
  a.finals = {t.size()};
  for (std::size_t i = 0; i < t.size(); ++i) a.transitions.push_back({i, format_valuation(t[i]), i + 1});
  return a;
}

TraceNFA TraceNFA::extending(const Trace& prefix) {
  TraceNFA a;
  a.states = prefix.size() + 1;
  a.initial = {0};
  a.finals = {prefix.size()};
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    a.transitions.push_back({i, format_valuation(prefix[i]), i + 1});
  }
  a.transitions.push_back({prefix.size(), "*", prefix.size()});
  return a;
}

TraceNFA TraceNFA::from_json(const nlohmann::json& j) {
  TraceNFA a;
  a.states = j.at("states").get<std::size_t>();
  a.initial = j.at("initial").get<std::vector<std::size_t>>();
  a.finals = j.at("finals").get<std::vector<std::size_t>>();
  for (const auto& t : j.at("transitions")) {
    a.transitions.push_back(
        {t.at("from").get<std::size_t>(), t.at("label").get<std::string>(), t.at("to").get<std::size_t>()});
  }
  a.validate();
  return a;
}

nlohmann::ordered_json TraceNFA::to_json() const {
  nlohmann::ordered_json j;
  j["states"] = states;
  j["initial"] = initial;
  j["finals"] = finals;
  j["transitions"] = nlohmann::ordered_json::array();
  for (const auto& t : transitions) {
    j["transitions"].push_back({{"from", t.from}, {"label", t.label}, {"to", t.to}});
  }
  return j;
}

void TraceNFA::validate() const {
  auto check = [&](std::size_t s) {
    if (s >= states) throw std::invalid_argument("automaton state " + std::to_string(s) + " out of range");
  };
  for (std::size_t s : initial) check(s);
  for (std::size_t s : finals) check(s);
  for (const auto& t : transitions) {
    check(t.from);
    check(t.to);
    if (t.label != "*") parse_valuation(t.label);
  }
}

WeightedAutomaton product(const WeightedAutomaton& b, const TraceNFA& nfa) {
  nfa.validate();
  struct Label {
    bool any;
    Valuation v;
  };
  std::vector<std::vector<std::pair<Label, std::size_t>>> moves(nfa.states);
  for (const auto& t : nfa.transitions) {
    Label l{t.label == "*", {}};
    if (!l.any) {
      l.v = parse_valuation(t.label);
      for (const auto& name : l.v) {
        if (!std::binary_search(b.variables.begin(), b.variables.end(), name)) {
          throw std::invalid_argument("variable '" + name + "' does not occur in the formula");
        }
      }
    }
    moves[t.from].emplace_back(std::move(l), t.to);
  }
  std::vector<char> nfa_final(nfa.states, 0);
  for (std::size_t s : nfa.finals) nfa_final[s] = 1;

  auto successors = [&](std::size_t n, const Valuation& v) {
    std::vector<std::size_t> out;
    for (const auto& [l, to] : moves[n]) {
      if (l.any || l.v == v) out.push_back(to);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };

  WeightedAutomaton p;
  p.variables = b.variables;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  std::deque<std::pair<std::size_t, std::size_t>> queue;
  auto visit = [&](std::size_t q, std::size_t n) {
    auto [it, inserted] = index.emplace(std::make_pair(q, n), p.size());
    if (inserted) {
      p.labels.push_back(b.labels[q]);
      p.in.emplace_back(0);
      p.final.push_back(b.final[q] && nfa_final[n]);
      p.origin.push_back(b.origin[q]);
      p.out.emplace_back();
      queue.emplace_back(q, n);
    }
    return it->second;
  };
  std::vector<std::size_t> starts = nfa.initial;
  std::sort(starts.begin(), starts.end());
  for (std::size_t q = 0; q < b.size(); ++q) {
    if (b.in[q] == 0) continue;
    for (std::size_t n0 : starts) {
      for (std::size_t n : successors(n0, b.labels[q])) {
        std::size_t id = visit(q, n);
        if (b.in[q] > p.in[id]) p.in[id] = b.in[q];
      }
    }
  }
  while (!queue.empty()) {
    auto [q, n] = queue.front();
    queue.pop_front();
    std::size_t from = index.at({q, n});
    for (const auto& [t, wt] : b.out[q]) {
      for (std::size_t m : successors(n, b.labels[t])) {
        std::size_t to = visit(t, m);
        p.out[from].emplace_back(to, wt);
      }
    }
  }
  for (auto& edges : p.out) {
    std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  }
  return p;
}

// ---------------------------------------------------------------------------

Analysis::Analysis(const Formula& f)
    : reduced_(TreeAutomaton(f).reduce()), b_(build_weighted(reduced_)), table_(behaviour_table(b_)) {}

LanguageResult Analysis::language(const TraceNFA& nfa) const {
  WeightedAutomaton p = product(b_, nfa);
  BehaviourTable t = behaviour_table(p);
  return LanguageResult{behaviour(p, t), mlt_acceptor(p, t)};
}

Rational Analysis::trace_probability(const Trace& t) const {
  return language(TraceNFA::single(t)).probability;
}

LanguageResult Analysis::prefix(const Trace& prefix) const {
  return language(TraceNFA::extending(prefix));
}

Rational trace_probability(const Formula& f, const Trace& t) { return Analysis(f).trace_probability(t); }

LanguageResult language_probability(const Formula& f, const TraceNFA& nfa) {
  return Analysis(f).language(nfa);
}

LanguageResult prefix_extension_query(const Formula& f, const Trace& prefix) {
  return Analysis(f).prefix(prefix);
}

nlohmann::ordered_json to_json(const WeightedAutomaton& b) {
  using json = nlohmann::ordered_json;
  json j;
  j["variables"] = b.variables;
  j["states"] = json::array();
  for (std::size_t q = 0; q < b.size(); ++q) {
    json s;
    s["id"] = q;
    s["origin"] = b.origin[q];
    s["valuation"] = format_valuation(b.labels[q]);
    s["in"] = to_fraction_string(b.in[q]);
    s["final"] = b.final[q] != 0;
    s["edges"] = json::array();
    for (const auto& [t, w] : b.out[q]) s["edges"].push_back({{"to", t}, {"weight", to_fraction_string(w)}});
    j["states"].push_back(std::move(s));
  }
  return j;
}

}  // namespace pltlf
