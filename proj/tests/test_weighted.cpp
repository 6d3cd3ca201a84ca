#include <doctest.h>

#include "pltlf/weighted.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

using namespace pltlf;

namespace {

const char* const kPhi0 = "P<=0.5[a] & P>=0.6[X b]";
const char* const kPhi1 = "P>=0.5[a] & P>=0.6[!a]";
const char* const kPsi = "X !b & P<=0.7[a U b] & P<=0.6[X(!a & !b)]";

std::size_t code(const TreeAutomaton& a, const std::vector<std::string>& members) {
  std::vector<Formula> fs;
  for (const auto& m : members) fs.push_back(normalize(parse_formula(m)));
  auto atom = atom_from_formulas(a.closure(), fs);
  REQUIRE(atom);
  return atom->code();
}

}  // namespace

TEST_CASE("phi0") {
  Analysis an(parse_formula(kPhi0));
  CHECK(an.value() == 1);
  CHECK(an.trace_probability(parse_trace("-;a;b")) == Rational(1, 2));
  CHECK(an.trace_probability(parse_trace("-;-;b")) == 1);
  CHECK(an.trace_probability(parse_trace("a")) == 0);

  auto acc = an.acceptor();
  CHECK(acc.value == 1);
  for (const char* t : {"-;-;b", "-;-;a,b", "-;-;b;-"}) CHECK(acc.accepts(parse_trace(t)));
  CHECK_FALSE(acc.accepts(parse_trace("-;a;b")));

  auto mlts = enumerate_mlts(acc, 1, 10);
  REQUIRE(mlts.size() == 1);
  CHECK(mlts[0].size() == 3);
  CHECK(an.trace_probability(mlts[0]) == 1);
  CHECK_THROWS(enumerate_mlts(acc, 0, 10));

  for (const auto& t : enumerate_mlts(acc, 20, 5)) CHECK(an.trace_probability(t) == an.value());
  CHECK(an.prefix(parse_trace("-")).probability == 1);
}

TEST_CASE("the max-plus recurrence is a fixpoint") {
  Analysis an(parse_formula(kPsi));
  const auto& t = an.table();
  CHECK(behaviour_step(an.weighted(), t.w) == t.w);
  CHECK(t.iterations <= an.weighted().size() + 1);
  for (const auto& w : t.w) CHECK((w >= 0 && w <= 1));
}

TEST_CASE("psi") {
  const Formula psi = parse_formula(kPsi);
  Analysis an(psi);
  const std::string P1 = "P<=0.7[a U b]", P2 = "P<=0.6[X(!a & !b)]", P1n = "P>0.7[a U b]";
  const std::string npsi = std::string("!(") + kPsi + ")";
  auto a1 = code(an.automaton(), {kPsi, "X !b", P1, P2, "!(a U b)", "!a", "!b", "!X(a U b)", "!a & !b", "!X(!a & !b)"});
  auto a2 = code(an.automaton(), {kPsi, "X !b", P1, P2, "!(a U b)", "!a", "!b", "!X(a U b)", "!a & !b", "X(!a & !b)"});
  auto a8 = code(an.automaton(), {npsi, "X !b", P1n, P2, "a U b", "a", "!b", "X(a U b)", "!(!a & !b)", "!X(!a & !b)"});
  const auto& b = an.weighted();
  auto q1 = b.find_origin(a1), q2 = b.find_origin(a2), q8 = b.find_origin(a8);
  REQUIRE(q1);
  REQUIRE(q2);
  REQUIRE(q8);
  CHECK(b.weight(*q1, *q8) == Rational(7, 10));
  CHECK(b.weight(*q1, *q2) == Rational(3, 5));

  CHECK(an.value() == 1);
  CHECK(an.trace_probability(parse_trace("-;a")) == 1);
  CHECK(an.prefix(parse_trace("-;a")).probability == 1);
  CHECK(prefix_extension_query(psi, parse_trace("-;a")).probability == 1);
}

TEST_CASE("unsatisfiable formulas have value 0") {
  Analysis an(parse_formula(kPhi1));
  CHECK(an.value() == 0);
  CHECK(an.acceptor().empty());
  CHECK(enumerate_mlts(an.acceptor(), 5, 5).empty());
  CHECK(an.trace_probability(parse_trace("-;a")) == 0);
}

TEST_CASE("unary weights are 1 without probabilistic obligations") {
  Analysis an(parse_formula("X a"));
  const auto& b = an.weighted();
  for (std::size_t q = 0; q < b.size(); ++q) {
    for (const auto& [to, w] : b.out[q]) CHECK(w == 1);
  }
  CHECK(an.value() == 1);
}

TEST_CASE("trace languages") {
  const Formula phi0 = parse_formula(kPhi0);
  auto all = language_probability(phi0, TraceNFA::universal());
  CHECK(all.probability == 1);
  CHECK(all.acceptor.accepts(parse_trace("-;-;b")));

  const Trace t = parse_trace("-;a;b");
  CHECK(language_probability(phi0, TraceNFA::single(t)).probability == trace_probability(phi0, t));

  std::ifstream in(std::string(PLTLF_DATA_DIR) + "/universal.nfa.json");
  auto nfa = TraceNFA::from_json(nlohmann::json::parse(in));
  CHECK(language_probability(phi0, nfa).probability == 1);

  auto ext = TraceNFA::extending(parse_trace("-;a"));
  CHECK(language_probability(phi0, ext).probability == Rational(1, 2));
}
