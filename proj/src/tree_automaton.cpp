#include "pltlf/tree_automaton.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace pltlf {

std::string q_label(QMask q) {
  std::string out = "{";
  bool first = true;
  for (unsigned i = 0; i < 32; ++i) {
    if (!((q >> i) & 1U)) continue;
    if (!first) out += ',';
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

std::optional<std::size_t> Scenario::position(QMask q) const {
  auto it = std::lower_bound(members.begin(), members.end(), q);
  if (it == members.end() || *it != q) return std::nullopt;
  return static_cast<std::size_t>(it - members.begin());
}

LinearSystem build_system(const ClosureSet& c, const std::vector<std::size_t>& prob,
                          const std::vector<QMask>& members) {
  LinearSystem sys;
  std::vector<std::size_t> var;
  for (QMask q : members) var.push_back(sys.add_variable("x" + q_label(q)));
  for (std::size_t j = 0; j < prob.size(); ++j) {
    const Formula& p = c[prob[j]];
    std::vector<Term> terms;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if ((members[i] >> j) & 1U) terms.emplace_back(var[i], 1);
    }
    sys.add(std::move(terms), relation_of(p.comparison()), p.bound());
  }
  for (std::size_t v : var) sys.add({{v, Rational(1)}}, Relation::GE, 0);
  std::vector<Term> sum;
  for (std::size_t v : var) sum.emplace_back(v, 1);
  sys.add(std::move(sum), Relation::EQ, 1);
  return sys;
}

ScenarioFamily scenario_family(const ClosureSet& c, const std::vector<std::size_t>& prob) {
  if (prob.size() > 4) {
    throw std::length_error("an atom with " + std::to_string(prob.size()) +
                            " probabilistic formulas exceeds the supported four");
  }
  const unsigned qs = 1U << prob.size();
  std::vector<std::vector<QMask>> subsets;
  for (std::uint64_t s = 1; s < (std::uint64_t{1} << qs); ++s) {
    std::vector<QMask> members;
    for (QMask q = 0; q < qs; ++q) {
      if ((s >> q) & 1U) members.push_back(q);
    }
    subsets.push_back(std::move(members));
  }
  std::stable_sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  ScenarioFamily family;
  for (auto& members : subsets) {
    auto r = solve_feasibility(build_system(c, prob, members));
    if (r.feasible) family.push_back(Scenario{std::move(members), std::move(r.witness)});
  }
  return family;
}

// ---------------------------------------------------------------------------

std::size_t WitnessNode::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

std::size_t WitnessNode::depth() const {
  std::size_t d = 0;
  for (const auto& c : children) d = std::max(d, c.depth() + 1);
  return d;
}

namespace {

bool holds_at(const WitnessNode& w, const Formula& f) {
  switch (f.op()) {
    case Op::Prop: return w.valuation.count(f.name()) > 0;
    case Op::True: return true;
    case Op::False: return false;
    case Op::Not: return !holds_at(w, f[0]);
    case Op::And:
      return std::all_of(f.children().begin(), f.children().end(),
                         [&](const Formula& c) { return holds_at(w, c); });
    case Op::Next:
      return !w.children.empty() &&
             std::all_of(w.children.begin(), w.children.end(),
                         [&](const WitnessNode& c) { return holds_at(c, f[0]); });
    case Op::Until:
      if (holds_at(w, f[1])) return true;
      return !w.children.empty() && holds_at(w, f[0]) &&
             std::all_of(w.children.begin(), w.children.end(),
                         [&](const WitnessNode& c) { return holds_at(c, f); });
    case Op::Prob: {
      Rational sum = 0;
      for (const auto& c : w.children) {
        if (holds_at(c, f[0])) sum += c.probability;
      }
      return holds(f.comparison(), sum, f.bound());
    }
    default:
      throw std::logic_error("unexpected connective in normalized formula");
  }
}

void check_distribution(const WitnessNode& w) {
  if (w.children.empty()) return;
  Rational sum = 0;
  for (const auto& c : w.children) {
    if (c.probability < 0) throw std::invalid_argument("negative branch probability");
    sum += c.probability;
    check_distribution(c);
  }
  if (sum != 1) {
    throw std::invalid_argument("children probabilities sum to " + to_compact_string(sum) +
                                ", not 1");
  }
}

}  // namespace

bool check_model(const WitnessNode& model, const Formula& f) {
  check_distribution(model);
  return holds_at(model, normalize(f));
}

nlohmann::ordered_json to_json(const WitnessNode& model) {
  nlohmann::ordered_json j;
  j["valuation"] = format_valuation(model.valuation);
  j["probability"] = to_fraction_string(model.probability);
  if (model.state) j["state"] = *model.state;
  j["children"] = nlohmann::ordered_json::array();
  for (const auto& c : model.children) j["children"].push_back(to_json(c));
  return j;
}

// ---------------------------------------------------------------------------

struct TreeAutomaton::Core {
  struct Signature {
    std::uint64_t plus = 0;
    std::vector<std::size_t> minus;
    std::vector<std::size_t> prob;
    std::vector<std::size_t> prob_args;
    std::vector<std::size_t> members;
    std::uint64_t full = 0;
    const ScenarioFamily* family = nullptr;
    bool analysed = false;
    // Classes whose atoms satisfy every X ψ of the signature, with the Q
    // they realize and the X-obligations they discharge.
    std::vector<std::size_t> classes;
    std::vector<QMask> class_q;
    std::vector<std::uint64_t> class_cover;
  };

  Core(const Formula& f, Branching b) : formula(normalize(f)), closure(formula), branching(b) {}

  Formula formula;
  ClosureSet closure;
  Branching branching;
  std::vector<Atom> atoms;
  std::vector<std::size_t> args;
  std::vector<std::size_t> next_arg;
  std::vector<std::size_t> prob_arg;
  std::vector<std::uint64_t> argmask;
  std::vector<std::size_t> atom_class;
  std::vector<std::size_t> atom_sig;
  std::vector<std::vector<std::size_t>> class_atoms;
  std::vector<std::uint64_t> class_mask;
  std::vector<char> initial;
  std::vector<char> final;
  std::vector<Signature> sigs;
  std::map<std::vector<std::size_t>, ScenarioFamily> families;
  std::optional<GoodStateSet> good;

  void build();
  Signature& signature(std::size_t s);
  const ScenarioFamily& family_of(Signature& sig);

  using Options = std::vector<std::vector<std::pair<std::uint64_t, std::size_t>>>;
  Options options(Signature& sig, const Scenario& S,
                  const std::function<bool(std::size_t)>& class_ok);
  bool completable(const Options& opts, std::uint64_t full) const;
  /// Classes realizing each member of S.
  std::optional<std::vector<std::vector<std::size_t>>> choose(const Options& opts,
                                                               std::uint64_t full) const;
  void compute_good();
};

void TreeAutomaton::Core::build() {
  const std::uint64_t count = closure.code_count();
  if (count > (std::uint64_t{1} << 22)) {
    throw std::length_error("automaton would have " + std::to_string(count) +
                            " states; at most 2^22 are supported");
  }
  std::map<std::size_t, std::size_t> arg_slot;
  auto slot = [&](std::size_t idx) {
    auto [it, inserted] = arg_slot.emplace(idx, 0);
    return it;
  };
  for (std::size_t n : closure.nexts()) slot(closure.index_of(closure[n][0]));
  for (std::size_t p : closure.probabilistic()) slot(closure.index_of(closure[p][0]));
  if (arg_slot.size() > 64) throw std::length_error("too many temporal arguments");
  for (auto& [idx, s] : arg_slot) {
    s = args.size();
    args.push_back(idx);
  }
  for (std::size_t n : closure.nexts()) next_arg.push_back(arg_slot.at(closure.index_of(closure[n][0])));
  for (std::size_t p : closure.probabilistic()) {
    prob_arg.push_back(arg_slot.at(closure.index_of(closure[p][0])));
  }

  std::map<std::uint64_t, std::size_t> class_of_mask;
  std::map<std::pair<std::uint64_t, std::uint64_t>, std::size_t> sig_of_key;
  atoms.reserve(count);
  for (std::uint64_t code = 0; code < count; ++code) {
    Atom a = atom_from_code(closure, code);
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < args.size(); ++k) {
      if (a.contains(args[k])) mask |= std::uint64_t{1} << k;
    }
    std::uint64_t next_bits = 0;
    bool has_next = false;
    for (std::size_t k = 0; k < closure.nexts().size(); ++k) {
      if (a.contains(closure.nexts()[k])) {
        next_bits |= std::uint64_t{1} << k;
        has_next = true;
      }
    }
    std::uint64_t prob_bits = 0;
    bool leaf_ok = !has_next;
    for (std::size_t k = 0; k < closure.probabilistic().size(); ++k) {
      std::size_t p = closure.probabilistic()[k];
      if (!a.contains(p)) continue;
      prob_bits |= std::uint64_t{1} << k;
      leaf_ok = leaf_ok && holds(closure[p].comparison(), Rational(0), closure[p].bound());
    }
    auto [cit, cnew] = class_of_mask.emplace(mask, class_atoms.size());
    if (cnew) {
      class_atoms.emplace_back();
      class_mask.push_back(mask);
    }
    class_atoms[cit->second].push_back(code);
    atom_class.push_back(cit->second);

    auto [sit, snew] = sig_of_key.emplace(std::make_pair(next_bits, prob_bits), sigs.size());
    if (snew) {
      Signature sig;
      for (std::size_t k = 0; k < closure.nexts().size(); ++k) {
        if ((next_bits >> k) & 1U) {
          sig.plus |= std::uint64_t{1} << next_arg[k];
        } else {
          sig.minus.push_back(next_arg[k]);
        }
      }
      for (std::size_t k = 0; k < closure.probabilistic().size(); ++k) {
        if ((prob_bits >> k) & 1U) {
          sig.prob.push_back(closure.probabilistic()[k]);
          sig.prob_args.push_back(prob_arg[k]);
        }
      }
      sig.full = sig.minus.size() == 64 ? ~std::uint64_t{0}
                                        : (std::uint64_t{1} << sig.minus.size()) - 1;
      sigs.push_back(std::move(sig));
    }
    sigs[sit->second].members.push_back(code);
    atom_sig.push_back(sit->second);
    argmask.push_back(mask);
    initial.push_back(a.contains(closure.root_index()));
    final.push_back(leaf_ok);
    atoms.push_back(std::move(a));
  }
}

TreeAutomaton::Core::Signature& TreeAutomaton::Core::signature(std::size_t s) {
  Signature& sig = sigs[atom_sig[s]];
  if (sig.analysed) return sig;
  for (std::size_t c = 0; c < class_atoms.size(); ++c) {
    std::uint64_t mask = class_mask[c];
    if ((mask & sig.plus) != sig.plus) continue;
    QMask q = 0;
    for (std::size_t j = 0; j < sig.prob_args.size(); ++j) {
      if ((mask >> sig.prob_args[j]) & 1U) q |= QMask{1} << j;
    }
    std::uint64_t cover = 0;
    for (std::size_t i = 0; i < sig.minus.size(); ++i) {
      if (!((mask >> sig.minus[i]) & 1U)) cover |= std::uint64_t{1} << i;
    }
    sig.classes.push_back(c);
    sig.class_q.push_back(q);
    sig.class_cover.push_back(cover);
  }
  sig.analysed = true;
  return sig;
}

const ScenarioFamily& TreeAutomaton::Core::family_of(Signature& sig) {
  if (sig.family) return *sig.family;
  auto it = families.find(sig.prob);
  if (it == families.end()) it = families.emplace(sig.prob, scenario_family(closure, sig.prob)).first;
  sig.family = &it->second;
  return *sig.family;
}

TreeAutomaton::Core::Options TreeAutomaton::Core::options(
    Signature& sig, const Scenario& S, const std::function<bool(std::size_t)>& class_ok) {
  Options opts(S.members.size());
  for (std::size_t k = 0; k < sig.classes.size(); ++k) {
    auto pos = S.position(sig.class_q[k]);
    if (!pos || !class_ok(sig.classes[k])) continue;
    auto& o = opts[*pos];
    std::uint64_t cover = sig.class_cover[k];
    if (std::none_of(o.begin(), o.end(), [&](const auto& e) { return e.first == cover; })) {
      o.emplace_back(cover, sig.classes[k]);
    }
  }
  return opts;
}

bool TreeAutomaton::Core::completable(const Options& opts, std::uint64_t full) const {
  if (branching == Branching::Grouped) {
    std::uint64_t all = 0;
    for (const auto& o : opts) {
      if (o.empty()) return false;
      for (const auto& e : o) all |= e.first;
    }
    return all == full;
  }
  std::unordered_set<std::uint64_t> reach{0};
  for (const auto& o : opts) {
    if (o.empty()) return false;
    std::unordered_set<std::uint64_t> next;
    for (std::uint64_t r : reach) {
      for (const auto& e : o) next.insert(r | e.first);
    }
    reach = std::move(next);
  }
  return reach.count(full) > 0;
}

std::optional<std::vector<std::vector<std::size_t>>> TreeAutomaton::Core::choose(
    const Options& opts, std::uint64_t full) const {
  if (branching == Branching::Grouped) {
    if (!completable(opts, full)) return std::nullopt;
    std::vector<std::vector<std::size_t>> classes(opts.size());
    std::uint64_t cover = 0;
    for (std::size_t i = 0; i < opts.size(); ++i) {
      classes[i].push_back(opts[i][0].second);
      cover |= opts[i][0].first;
    }
    for (std::size_t i = 0; i < opts.size() && cover != full; ++i) {
      for (std::size_t k = 1; k < opts[i].size() && cover != full; ++k) {
        if ((opts[i][k].first & ~cover) == 0) continue;
        classes[i].push_back(opts[i][k].second);
        cover |= opts[i][k].first;
      }
    }
    return classes;
  }
  // layer[i]: reachable cover -> (previous cover, option index)
  std::vector<std::map<std::uint64_t, std::pair<std::uint64_t, std::size_t>>> layer(opts.size() + 1);
  layer[0].emplace(0, std::make_pair(0, 0));
  for (std::size_t i = 0; i < opts.size(); ++i) {
    for (const auto& [r, _] : layer[i]) {
      for (std::size_t k = 0; k < opts[i].size(); ++k) {
        layer[i + 1].emplace(r | opts[i][k].first, std::make_pair(r, k));
      }
    }
  }
  if (!layer.back().count(full)) return std::nullopt;
  std::vector<std::vector<std::size_t>> classes(opts.size());
  std::uint64_t cur = full;
  for (std::size_t i = opts.size(); i-- > 0;) {
    auto [prev, k] = layer[i + 1].at(cur);
    classes[i] = {opts[i][k].second};
    cur = prev;
  }
  return classes;
}

void TreeAutomaton::Core::compute_good() {
  GoodStateSet g;
  const std::size_t n = atoms.size();
  g.good.resize(n);
  g.distance.assign(n, -1);
  std::vector<char> class_good(class_atoms.size(), 0);
  for (std::size_t s = 0; s < n; ++s) {
    if (final[s]) {
      g.good.set(s);
      g.distance[s] = 0;
      class_good[atom_class[s]] = 1;
    }
  }
  std::vector<char> sig_done(sigs.size(), 0);
  for (int sweep = 1;; ++sweep) {
    std::vector<char> snapshot = class_good;
    auto ok = [&](std::size_t c) { return snapshot[c] != 0; };
    bool changed = false;
    for (std::size_t si = 0; si < sigs.size(); ++si) {
      if (sig_done[si]) continue;
      Signature& sig = signature(sigs[si].members.front());
      bool pending = std::any_of(sig.members.begin(), sig.members.end(),
                                 [&](std::size_t s) { return !g.good[s]; });
      if (!pending) {
        sig_done[si] = 1;
        continue;
      }
      bool success = false;
      for (const auto& S : family_of(sig)) {
        if (completable(options(sig, S, ok), sig.full)) {
          success = true;
          break;
        }
      }
      if (!success) continue;
      sig_done[si] = 1;
      for (std::size_t s : sig.members) {
        if (g.good[s]) continue;
        g.good.set(s);
        g.distance[s] = sweep;
        class_good[atom_class[s]] = 1;
        changed = true;
      }
    }
    if (!changed) {
      g.sweeps = static_cast<std::size_t>(sweep);
      break;
    }
  }
  good = std::move(g);
}

// ---------------------------------------------------------------------------

TreeAutomaton::TreeAutomaton(const Formula& f, Branching branching)
    : core_(std::make_shared<Core>(f, branching)) {
  core_->build();
}

TreeAutomaton::TreeAutomaton(std::shared_ptr<Core> core, bool reduced)
    : core_(std::move(core)), reduced_(reduced) {}

const Formula& TreeAutomaton::formula() const { return core_->formula; }
const ClosureSet& TreeAutomaton::closure() const { return core_->closure; }
Branching TreeAutomaton::branching() const { return core_->branching; }
std::size_t TreeAutomaton::state_count() const { return core_->atoms.size(); }
const Atom& TreeAutomaton::state(std::size_t s) const { return core_->atoms.at(s); }
bool TreeAutomaton::is_initial(std::size_t s) const { return core_->initial.at(s) && is_alive(s); }
bool TreeAutomaton::is_final(std::size_t s) const { return core_->final.at(s) && is_alive(s); }
bool TreeAutomaton::is_reduced() const { return reduced_; }

bool TreeAutomaton::is_alive(std::size_t s) const {
  return !reduced_ || good_states().good.test(s);
}

std::vector<std::size_t> TreeAutomaton::states() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < state_count(); ++s) {
    if (is_alive(s)) out.push_back(s);
  }
  return out;
}

std::vector<std::size_t> TreeAutomaton::initial_states() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < state_count(); ++s) {
    if (is_initial(s)) out.push_back(s);
  }
  return out;
}

std::vector<std::size_t> TreeAutomaton::final_states() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < state_count(); ++s) {
    if (is_final(s)) out.push_back(s);
  }
  return out;
}

const ScenarioFamily& TreeAutomaton::scenarios(std::size_t s) const {
  return core_->family_of(core_->signature(s));
}

void TreeAutomaton::for_each_tuple(
    std::size_t s, const Scenario& S,
    const std::function<bool(const std::vector<std::size_t>&)>& visit) const {
  auto& sig = core_->signature(s);
  const std::size_t k = S.members.size();
  std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> cand(k);
  for (std::size_t i = 0; i < sig.classes.size(); ++i) {
    auto pos = S.position(sig.class_q[i]);
    if (!pos) continue;
    for (std::size_t a : core_->class_atoms[sig.classes[i]]) {
      if (is_alive(a)) cand[*pos].emplace_back(a, sig.class_cover[i]);
    }
  }
  for (auto& c : cand) {
    if (c.empty()) return;
    std::sort(c.begin(), c.end());
  }
  std::vector<std::uint64_t> suffix(k + 1, 0);
  for (std::size_t i = k; i-- > 0;) {
    suffix[i] = suffix[i + 1];
    for (const auto& e : cand[i]) suffix[i] |= e.second;
  }
  std::vector<std::size_t> tuple(k);
  bool stop = false;
  std::function<void(std::size_t, std::uint64_t)> rec = [&](std::size_t i, std::uint64_t cover) {
    if (stop) return;
    if ((cover | suffix[i]) != sig.full) return;
    if (i == k) {
      if (!visit(tuple)) stop = true;
      return;
    }
    for (const auto& [a, c] : cand[i]) {
      tuple[i] = a;
      rec(i + 1, cover | c);
      if (stop) return;
    }
  };
  rec(0, 0);
}

std::vector<std::vector<std::size_t>> TreeAutomaton::transition_tuples(std::size_t s,
                                                                       const Scenario& S,
                                                                       std::size_t limit) const {
  std::vector<std::vector<std::size_t>> out;
  if (limit == 0) return out;
  for_each_tuple(s, S, [&](const std::vector<std::size_t>& t) {
    out.push_back(t);
    return out.size() < limit;
  });
  return out;
}

bool TreeAutomaton::is_transition(std::size_t s, const Scenario& S,
                                  const std::vector<std::size_t>& tuple) const {
  if (tuple.size() != S.members.size() || tuple.empty()) return false;
  const auto& c = closure();
  const Atom& a = state(s);
  for (std::size_t n : c.nexts()) {
    std::size_t arg = c.index_of(c[n][0]);
    bool all = std::all_of(tuple.begin(), tuple.end(),
                           [&](std::size_t t) { return state(t).contains(arg); });
    if (a.contains(n) != all) return false;
  }
  const auto& prob = a.probabilistic();
  for (std::size_t j = 0; j < prob.size(); ++j) {
    std::size_t arg = c.index_of(c[prob[j]][0]);
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      bool in_q = (S.members[i] >> j) & 1U;
      if (in_q != state(tuple[i]).contains(arg)) return false;
    }
  }
  return true;
}

std::vector<std::size_t> TreeAutomaton::completable_children(std::size_t s, const Scenario& S,
                                                             std::size_t position) const {
  auto& sig = core_->signature(s);
  auto alive_class = [&](std::size_t cls) {
    const auto& members = core_->class_atoms[cls];
    return std::any_of(members.begin(), members.end(), [&](std::size_t a) { return is_alive(a); });
  };
  auto opts = core_->options(sig, S, alive_class);
  std::vector<std::size_t> out;
  auto collect = [&](std::size_t k) {
    for (std::size_t a : core_->class_atoms[sig.classes[k]]) {
      if (is_alive(a)) out.push_back(a);
    }
  };
  if (core_->branching == Branching::Grouped) {
    if (!core_->completable(opts, sig.full)) return {};
    for (std::size_t k = 0; k < sig.classes.size(); ++k) {
      auto pos = S.position(sig.class_q[k]);
      if (pos && *pos == position && alive_class(sig.classes[k])) collect(k);
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  std::unordered_set<std::uint64_t> reach{0};
  for (std::size_t i = 0; i < opts.size(); ++i) {
    if (i == position) continue;
    if (opts[i].empty()) return {};
    std::unordered_set<std::uint64_t> next;
    for (std::uint64_t r : reach) {
      for (const auto& e : opts[i]) next.insert(r | e.first);
    }
    reach = std::move(next);
  }
  for (std::size_t k = 0; k < sig.classes.size(); ++k) {
    auto pos = S.position(sig.class_q[k]);
    if (!pos || *pos != position) continue;
    std::uint64_t cover = sig.class_cover[k];
    bool fits = std::any_of(reach.begin(), reach.end(),
                            [&](std::uint64_t r) { return (r | cover) == sig.full; });
    if (fits) collect(k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const GoodStateSet& TreeAutomaton::good_states() const {
  if (!core_->good) core_->compute_good();
  return *core_->good;
}

TreeAutomaton TreeAutomaton::reduce() const {
  good_states();
  return TreeAutomaton(core_, true);
}

bool TreeAutomaton::is_empty() const {
  const auto& g = good_states();
  for (std::size_t s = 0; s < state_count(); ++s) {
    if (core_->initial[s] && g.good.test(s)) return false;
  }
  return true;
}

std::optional<WitnessNode> TreeAutomaton::witness_model() const {
  const auto& g = good_states();
  std::optional<std::size_t> root;
  for (std::size_t s = 0; s < state_count(); ++s) {
    if (!core_->initial[s] || !g.good.test(s)) continue;
    if (!root || g.distance[s] < g.distance[*root]) root = s;
  }
  if (!root) return std::nullopt;

  std::function<WitnessNode(std::size_t)> build = [&](std::size_t s) {
    WitnessNode node;
    node.valuation = state(s).valuation();
    node.state = s;
    if (core_->final[s]) return node;
    const int d = g.distance[s];
    auto closer = [&](std::size_t cls) {
      const auto& members = core_->class_atoms[cls];
      return std::any_of(members.begin(), members.end(), [&](std::size_t a) {
        return g.distance[a] >= 0 && g.distance[a] < d;
      });
    };
    auto& sig = core_->signature(s);
    for (const auto& S : core_->family_of(sig)) {
      auto picked = core_->choose(core_->options(sig, S, closer), sig.full);
      if (!picked) continue;
      for (std::size_t i = 0; i < picked->size(); ++i) {
        const auto& group = (*picked)[i];
        for (std::size_t cls : group) {
          std::optional<std::size_t> best;
          for (std::size_t a : core_->class_atoms[cls]) {
            int da = g.distance[a];
            if (da < 0 || da >= d) continue;
            if (!best || da < g.distance[*best]) best = a;
          }
          WitnessNode child = build(*best);
          child.probability = S.witness[i] / Rational(static_cast<long>(group.size()));
          node.children.push_back(std::move(child));
        }
      }
      return node;
    }
    throw std::logic_error("good state without a decreasing transition");
  };
  return build(*root);
}

nlohmann::ordered_json TreeAutomaton::to_json(std::size_t edge_limit) const {
  using json = nlohmann::ordered_json;
  const auto& c = closure();
  const auto& g = good_states();
  json j;
  j["formula"] = formula().text();
  j["reduced"] = reduced_;
  j["closure"] = json::array();
  for (const auto& m : c.members()) j["closure"].push_back(m.text());
  j["state_count"] = states().size();
  j["states"] = json::array();
  for (std::size_t s : states()) {
    json st;
    st["id"] = s;
    st["atom"] = json::array();
    for (const auto& f : state(s).formulas(c)) st["atom"].push_back(f.text());
    st["valuation"] = format_valuation(state(s).valuation());
    st["initial"] = is_initial(s);
    st["final"] = is_final(s);
    st["good"] = static_cast<bool>(g.good.test(s));
    st["distance"] = g.distance[s];
    if (edge_limit > 0) {
      json edges = json::array();
      bool truncated = false;
      for (const auto& S : scenarios(s)) {
        json members = json::array();
        for (QMask q : S.members) members.push_back(q_label(q));
        for_each_tuple(s, S, [&](const std::vector<std::size_t>& t) {
          if (edges.size() >= edge_limit) {
            truncated = true;
            return false;
          }
          edges.push_back(json{{"scenario", members}, {"children", t}});
          return true;
        });
        if (truncated) break;
      }
      st["hyperedges"] = std::move(edges);
      st["hyperedges_truncated"] = truncated;
    }
    j["states"].push_back(std::move(st));
  }
  j["good_sweeps"] = g.sweeps;
  return j;
}

std::string TreeAutomaton::to_text(std::size_t edge_limit) const {
  std::ostringstream out;
  const auto& c = closure();
  const auto& g = good_states();
  out << "formula " << formula().text() << '\n';
  out << "closure (" << c.size() << ")\n";
  for (std::size_t i = 0; i < c.size(); ++i) out << "  [" << i << "] " << c[i].text() << '\n';
  for (std::size_t s : states()) {
    out << "state " << s << (is_initial(s) ? " initial" : "") << (is_final(s) ? " final" : "")
        << (g.good.test(s) ? " good d=" + std::to_string(g.distance[s]) : " bad") << " {";
    bool first = true;
    for (const auto& f : state(s).formulas(c)) {
      out << (first ? "" : ", ") << f.text();
      first = false;
    }
    out << "}\n";
    if (edge_limit == 0) continue;
    std::size_t shown = 0;
    for (const auto& S : scenarios(s)) {
      for_each_tuple(s, S, [&](const std::vector<std::size_t>& t) {
        if (shown++ >= edge_limit) return false;
        out << "  ";
        for (QMask q : S.members) out << q_label(q);
        out << " ->";
        for (std::size_t a : t) out << ' ' << a;
        out << '\n';
        return true;
      });
      if (shown > edge_limit) break;
    }
  }
  return out.str();
}

bool is_satisfiable(const Formula& f, Branching branching) {
  return !TreeAutomaton(f, branching).is_empty();
}

std::optional<WitnessNode> witness_model(const Formula& f, Branching branching) {
  return TreeAutomaton(f, branching).witness_model();
}

}  // namespace pltlf
