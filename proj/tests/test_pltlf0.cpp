#include <doctest.h>

#include "pltlf/pltlf0.hpp"

#include "vertex_enum.hpp"

using namespace pltlf;

namespace {

Pltlf0Formula load(const char* name) { return load_pltlf0(std::string(PLTLF_DATA_DIR) + "/" + name); }

std::vector<Rational> fractions(std::initializer_list<const char*> xs) {
  std::vector<Rational> out;
  for (const char* x : xs) out.push_back(parse_rational(x));
  return out;
}

}  // namespace

TEST_CASE("file format") {
  auto phi = parse_pltlf0("# comment\nP<=0.8 : F a\n\nP<=0.7 : G(a -> F b)  # trailing\n");
  REQUIRE(phi.size() == 2);
  CHECK(phi.constraints[0].cmp == Comparison::LE);
  CHECK(phi.constraints[0].bound == Rational(4, 5));
  CHECK(phi.constraints[1].formula == parse_formula("G(a -> F b)"));
  CHECK(parse_pltlf0(format_pltlf0(phi)).size() == 2);

  CHECK_THROWS(parse_pltlf0("P<=0.5 : P>=0.5[a]\n"));
  CHECK_THROWS(parse_pltlf0("P<=1.5 : a\n"));
  CHECK_THROWS(parse_pltlf0("a\n"));
}

TEST_CASE("scenario naming") {
  CHECK(scenario_name(1, 2) == "01");
  CHECK(scenario_name(2, 2) == "10");
  CHECK(scenario_holds(2, 2, 0));
  CHECK_FALSE(scenario_holds(2, 2, 1));
  auto phi1 = load("phi1.p0");
  CHECK(scenario_description(phi1, 1) == "{!F a, G(a -> F b)}");
}

TEST_CASE("L_Phi for Phi1") {
  auto phi1 = load("phi1.p0");
  ScenarioTable t = build_lphi(phi1);
  CHECK(t.n == 2);
  CHECK(t.satisfiable == std::vector<char>{0, 1, 1, 1});
  CHECK(t.feasible);
  CHECK(t.system.satisfied_by(t.witness));
  CHECK(t.system.satisfied_by(fractions({"0", "1/5", "3/10", "1/2"})));
  CHECK(is_satisfiable0(phi1));
}

TEST_CASE("satisfiability") {
  CHECK(is_satisfiable0(load("phi0.p0")));
  CHECK_FALSE(is_satisfiable0(load("contradiction.p0")));
  CHECK(is_satisfiable0(Pltlf0Formula{}));
  ScenarioTable empty = build_lphi(Pltlf0Formula{});
  CHECK(empty.count() == 1);
  CHECK(empty.feasible);
}

TEST_CASE("scenario maxima are the LP optima of L_Phi") {
  for (const char* name : {"phi1.p0", "psi1.p0", "phi0.p0"}) {
    ScenarioTable t = scenario_maxima(load(name));
    Rational sum = 0;
    for (std::size_t i = 0; i < t.count(); ++i) {
      CHECK(t.maxima[i] == *oracle::vertex_maximum(t.system, i));
      if (!t.satisfiable[i]) CHECK(t.maxima[i] == 0);
      sum += t.maxima[i];
    }
    CHECK(sum >= 1);
  }
  CHECK(scenario_maxima(load("phi1.p0")).maxima == fractions({"0", "7/10", "4/5", "1/2"}));
  CHECK(scenario_maxima(load("psi1.p0")).maxima == fractions({"0", "3/5", "1/2", "1/10"}));
  CHECK(scenario_maxima(load("psi1.p0"), 4).maxima == scenario_maxima(load("psi1.p0"), 1).maxima);

  auto single = parse_pltlf0("P<=1 : F a\n");
  ScenarioTable t = scenario_maxima(single);
  CHECK(t.maxima == fractions({"1", "1"}));
}

TEST_CASE("prefix acceptance and monitoring") {
  auto psi1 = load("psi1.p0");
  CHECK_FALSE(accepts_prefix(psi1, 1, parse_trace("-;a")));
  CHECK(accepts_prefix(psi1, 2, parse_trace("-;a")));
  CHECK(accepts_prefix(psi1, 1, Trace{}));
  CHECK_FALSE(accepts_prefix(psi1, 0, Trace{}));

  CHECK(most_likely_scenario(psi1, Trace{}) == 1);
  CHECK(most_likely_scenario(psi1, parse_trace("-")) == 1);
  CHECK(most_likely_scenario(psi1, parse_trace("-;a")) == 2);

  auto m = MonitorState::start(psi1);
  CHECK(m.best() == 1);
  m = m.step({});
  CHECK(m.best() == 1);
  m = m.step({"a"});
  CHECK(m.best() == 2);
  CHECK(m.probability() == Rational(1, 2));
  CHECK_FALSE(m.violated());
}

TEST_CASE("violations are absorbing") {
  auto never_a = parse_pltlf0("P>=1 : G !a\n");
  auto m = MonitorState::start(never_a);
  CHECK_FALSE(m.violated());
  m = m.step({"a"});
  CHECK(m.violated());
  m = m.step({});
  CHECK(m.best() == -1);
  CHECK(m.violated());
}

TEST_CASE("monitoring with a property") {
  auto phi1 = load("phi1.p0");
  auto psi1 = load("psi1.p0");
  CHECK(monitor_with_property(phi1, parse_formula("F b"), Trace{}) == most_likely_scenario(phi1, Trace{}));
  CHECK(monitor_with_property(phi1, parse_formula("false"), parse_trace("-")) == -1);
  CHECK(monitor_with_property(psi1, parse_formula("G !a"), parse_trace("-;a")) == -1);
}

TEST_CASE("translation to the full logic") {
  CHECK(to_pltlf(load("phi0.p0")) == parse_formula("P<=0.5[a] & P>=0.6[X b]"));
  CHECK(to_pltlf(load("phi1.p0")) == parse_formula("P<=0.8[F a] & P<=0.7[G(a -> F b)]"));
  CHECK(to_pltlf(Pltlf0Formula{}) == Formula::top());
}
