#include <doctest.h>

#include "pltlf/tree_automaton.hpp"

#include "tree_oracle.hpp"

using namespace pltlf;

namespace {

const char* const kPhi0 = "P<=0.5[a] & P>=0.6[X b]";
const char* const kPhi1 = "P>=0.5[a] & P>=0.6[!a]";
const char* const kPsi = "X !b & P<=0.7[a U b] & P<=0.6[X(!a & !b)]";

WitnessNode node(Valuation v, Rational p, std::vector<WitnessNode> children = {}) {
  WitnessNode n;
  n.valuation = std::move(v);
  n.probability = std::move(p);
  n.children = std::move(children);
  return n;
}

std::size_t code(const TreeAutomaton& a, const std::vector<std::string>& members) {
  std::vector<Formula> fs;
  for (const auto& m : members) fs.push_back(normalize(parse_formula(m)));
  auto atom = atom_from_formulas(a.closure(), fs);
  REQUIRE(atom);
  return atom->code();
}

}  // namespace

TEST_CASE("satisfiability of the small examples") {
  CHECK(is_satisfiable(parse_formula(kPhi0)));
  CHECK_FALSE(is_satisfiable(parse_formula(kPhi1)));
  CHECK(is_satisfiable(parse_formula(kPsi)));
  CHECK(is_satisfiable(parse_formula("true")));
  CHECK_FALSE(is_satisfiable(parse_formula("a & !a")));
  CHECK_FALSE(is_satisfiable(parse_formula("P<0[a]")));
  CHECK(is_satisfiable(parse_formula("P>0.5[a] & P>0.5[b]")));
  CHECK_FALSE(is_satisfiable(parse_formula("P>0.5[a] & P>0.5[!a]")));
}

TEST_CASE("an existential negated next needs several children") {
  Formula f = parse_formula("X true & !X a & !X !a");
  CHECK(is_satisfiable(f));
  CHECK_FALSE(is_satisfiable(f, Branching::OnePerMember));
  auto m = witness_model(f);
  REQUIRE(m);
  CHECK(m->children.size() >= 2);
  CHECK(check_model(*m, f));
}

TEST_CASE("scenario families") {
  ClosureSet c(normalize(parse_formula("a")));
  auto fam = scenario_family(c, {});
  REQUIRE(fam.size() == 1);
  CHECK(fam[0].members == std::vector<QMask>{0});
  CHECK(fam[0].witness == std::vector<Rational>{1});
}

TEST_CASE("automaton of psi") {
  TreeAutomaton a(parse_formula(kPsi));
  const std::string P1 = "P<=0.7[a U b]", P2 = "P<=0.6[X(!a & !b)]";
  const std::string npsi = std::string("!(") + kPsi + ")";
  auto a1 = code(a, {kPsi, "X !b", P1, P2, "!(a U b)", "!a", "!b", "!X(a U b)", "!a & !b", "!X(!a & !b)"});
  auto a2 = code(a, {kPsi, "X !b", P1, P2, "!(a U b)", "!a", "!b", "!X(a U b)", "!a & !b", "X(!a & !b)"});
  auto a3 = code(a, {npsi, "!X !b", P1, P2, "a U b", "a", "!b", "X(a U b)", "!(!a & !b)", "!X(!a & !b)"});
  auto a4 = code(a, {npsi, "!X !b", P1, P2, "!(a U b)", "a", "!b", "!X(a U b)", "!(!a & !b)", "X(!a & !b)"});
  auto a5 = code(a, {npsi, "!X !b", P1, P2, "a U b", "a", "!b", "X(a U b)", "!(!a & !b)", "X(!a & !b)"});

  CHECK(a.is_initial(a1));
  CHECK_FALSE(a.good_states().good.test(a5));
  for (const auto& S : a.scenarios(a5)) CHECK(a.transition_tuples(a5, S, 0).empty());

  const auto& fam = a.scenarios(a1);
  auto has = [&](std::vector<QMask> m) {
    return std::any_of(fam.begin(), fam.end(), [&](const Scenario& S) { return S.members == m; });
  };
  CHECK(has({1, 2, 3}));
  CHECK(has({1, 2}));
  CHECK_FALSE(has({1, 3}));
  auto s0 = std::find_if(fam.begin(), fam.end(), [](const Scenario& S) { return S.members == std::vector<QMask>{1, 2, 3}; });
  REQUIRE(s0 != fam.end());
  CHECK(a.is_transition(a1, *s0, {a3, a4, a5}));
  CHECK_FALSE(a.is_transition(a2, *s0, {a3, a4, a5}));

  TreeAutomaton r = a.reduce();
  CHECK(r.is_reduced());
  CHECK_FALSE(r.is_alive(a5));
  CHECK_FALSE(r.is_empty());
  CHECK(r.reduce().states() == r.states());
}

TEST_CASE("reduce of an unsatisfiable formula has no initial states") {
  TreeAutomaton a(parse_formula(kPhi1));
  for (auto s : a.initial_states()) CHECK_FALSE(a.good_states().good.test(s));
  CHECK(a.reduce().initial_states().empty());
  CHECK(a.is_empty());
}

TEST_CASE("witness models") {
  CHECK_FALSE(witness_model(parse_formula(kPhi1)));
  for (const char* f : {kPhi0, kPsi, "G(a -> F b) & F a", "P>=1[G a]"}) {
    auto m = witness_model(parse_formula(f));
    REQUIRE(m);
    CHECK(check_model(*m, parse_formula(f)));
  }
  auto m = witness_model(parse_formula(kPsi));
  REQUIRE(m);
  REQUIRE(m->children.size() >= 1);
  Rational sum = 0;
  for (const auto& c : m->children) sum += c.probability;
  CHECK(sum == 1);
}

TEST_CASE("model checking") {
  Formula phi0 = parse_formula(kPhi0);
  // a holds at the next point with probability 0, X b with probability 1
  auto fig_a = node({}, 1, {node({}, 1, {node({"b"}, 1)})});
  CHECK(check_model(fig_a, phi0));
  // a and X b at their bounds
  auto fig_c = node({}, 1, {node({"a"}, Rational(1, 2), {node({"b"}, 1)}),
                            node({}, Rational(1, 10), {node({"b"}, 1)}), node({}, Rational(2, 5))});
  CHECK(check_model(fig_c, phi0));
  auto too_much_a = node({}, 1, {node({"a"}, Rational(3, 5), {node({"b"}, 1)}), node({}, Rational(2, 5))});
  CHECK_FALSE(check_model(too_much_a, phi0));

  CHECK_FALSE(check_model(node({}, 1), parse_formula("X a")));
  CHECK(check_model(node({}, 1), parse_formula("P<=0.5[a]")));
  CHECK_THROWS(check_model(node({}, 1, {node({"a"}, Rational(1, 2))}), parse_formula("a")));
}

TEST_CASE("agreement with the bounded oracle on a few formulas") {
  for (const char* f : {kPhi0, kPhi1, "X P>=0.5[a] & !X P>=0.5[a]", "P>0[X a] & P>0[X !a]",
                        "G P<=0.5[a] & F true", "!X !a & !X a"}) {
    oracle::TreeOracle o(parse_formula(f));
    CHECK_MESSAGE(o.satisfiable() == is_satisfiable(parse_formula(f)), f);
  }
}

TEST_CASE("dumps") {
  TreeAutomaton a = TreeAutomaton(parse_formula(kPhi0)).reduce();
  auto j = a.to_json(2);
  CHECK(j.contains("states"));
  CHECK(!a.to_text(1).empty());
}
