#pragma once

#include "pltlf/pltlf0.hpp"

#include <istream>
#include <string>
#include <vector>

namespace pltlf {

struct Case {
  std::string id;
  std::vector<std::string> activities;
};

struct EventLog {
  std::vector<Case> cases;

  /// One singleton valuation per event.
  Trace trace(std::size_t i) const;
  /// Sorted, without duplicates.
  std::vector<std::string> activities() const;
};

/// CSV with a header naming `case_id`, `activity` and optionally `order`.
/// Cases keep the order of their first row; events follow file order, or the
/// order column when present (which must hold contiguous distinct integers
/// per case). Throws std::runtime_error describing the problem.
EventLog parse_log(std::istream& in);
EventLog load_log(const std::string& path);

struct FrequentSet {
  std::vector<std::string> items;
  Rational support;
};

/// Apriori: sets of at most `max_size` activities contained in at least
/// `min_support` of the cases. Ordered by size, then items.
std::vector<FrequentSet> frequent_sets(const EventLog& log, const Rational& min_support,
                                       std::size_t max_size = 2);

/// An LTLf pattern over the placeholders x (and y for binary templates).
struct Template {
  std::string name;
  std::size_t arity;
  Formula body;
};

Template make_template(std::string name, const Formula& body);
std::vector<Template> default_templates();
/// Either a comma-separated list of default template names, or the path of
/// a file with lines `name : formula`.
std::vector<Template> load_templates(const std::string& spec);

struct MinedConstraint {
  std::string template_name;
  std::vector<std::string> args;
  Formula formula;
  std::size_t satisfied = 0;
  std::size_t total = 0;

  Rational support() const {
    return make_rational(static_cast<long>(satisfied), static_cast<long>(total));
  }
};

struct MiningResult {
  std::vector<FrequentSet> sets;
  std::vector<MinedConstraint> mined;
  /// Every mined constraint as the pair P>=s φ, P<=s φ.
  Pltlf0Formula formula;
};

/// Number of cases satisfying `f`, reading every event as a singleton valuation.
std::size_t count_satisfying(const EventLog& log, const Formula& f);

MiningResult mine(const EventLog& log, const Rational& min_support,
                  const std::vector<Template>& catalog, unsigned jobs = 1);

}  // namespace pltlf
