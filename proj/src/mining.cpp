#include "pltlf/mining.hpp"

#include <boost/tokenizer.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

namespace pltlf {

Trace EventLog::trace(std::size_t i) const {
  Trace t;
  for (const auto& a : cases.at(i).activities) t.push_back(Valuation{a});
  return t;
}

std::vector<std::string> EventLog::activities() const {
  std::set<std::string> all;
  for (const auto& c : cases) all.insert(c.activities.begin(), c.activities.end());
  return {all.begin(), all.end()};
}

namespace {

std::string trim(std::string s) {
  auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  boost::tokenizer<boost::escaped_list_separator<char>> tok(line);
  std::vector<std::string> out;
  for (const auto& field : tok) out.push_back(trim(field));
  return out;
}

}  // namespace

EventLog parse_log(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!trim(line).empty()) {
      header = split_csv(line);
      break;
    }
  }
  if (header.empty()) throw std::runtime_error("empty log");
  auto column = [&](const std::string& name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  auto case_col = column("case_id");
  auto act_col = column("activity");
  auto order_col = column("order");
  if (!case_col || !act_col) throw std::runtime_error("log header must name columns case_id and activity");

  struct Event {
    long order;
    std::string activity;
  };
  std::vector<std::string> ids;
  std::map<std::string, std::vector<Event>> events;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    try {
      fields = split_csv(line);
    } catch (const boost::escaped_list_error& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
    if (fields.size() != header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(header.size()) + " fields, found " +
                               std::to_string(fields.size()));
    }
    const std::string& id = fields[*case_col];
    const std::string& activity = fields[*act_col];
    if (id.empty() || activity.empty()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": empty case_id or activity");
    }
    long order = 0;
    if (order_col) {
      try {
        std::size_t used = 0;
        order = std::stol(fields[*order_col], &used);
        if (used != fields[*order_col].size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        throw std::runtime_error("line " + std::to_string(line_no) + ": order '" + fields[*order_col] +
                                 "' is not an integer");
      }
    }
    auto [it, inserted] = events.try_emplace(id);
    if (inserted) ids.push_back(id);
    it->second.push_back({order, activity});
  }
  if (ids.empty()) throw std::runtime_error("log has no events");

  EventLog log;
  std::vector<std::string> bad;
  for (const auto& id : ids) {
    auto& evs = events.at(id);
    if (order_col) {
      std::stable_sort(evs.begin(), evs.end(), [](const Event& a, const Event& b) { return a.order < b.order; });
      for (std::size_t k = 1; k < evs.size(); ++k) {
        if (evs[k].order != evs[k - 1].order + 1) {
          bad.push_back(id);
          break;
        }
      }
    }
    Case c{id, {}};
    for (const auto& e : evs) c.activities.push_back(e.activity);
    log.cases.push_back(std::move(c));
  }
  if (!bad.empty()) {
    std::string msg = "order values are not contiguous distinct integers in case";
    msg += bad.size() > 1 ? "s " : " ";
    for (std::size_t i = 0; i < bad.size(); ++i) msg += (i ? ", " : "") + bad[i];
    throw std::runtime_error(msg);
  }
  return log;
}

EventLog load_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_log(in);
}

std::vector<FrequentSet> frequent_sets(const EventLog& log, const Rational& min_support,
                                       std::size_t max_size) {
  if (!is_probability(min_support)) throw std::invalid_argument("minimum support outside [0,1]");
  std::vector<FrequentSet> out;
  if (log.cases.empty() || max_size == 0) return out;
  const std::size_t total = log.cases.size();
  std::vector<std::set<std::string>> contents;
  for (const auto& c : log.cases) contents.emplace_back(c.activities.begin(), c.activities.end());
  auto support = [&](const std::vector<std::string>& items) {
    std::size_t n = 0;
    for (const auto& s : contents) {
      if (std::all_of(items.begin(), items.end(), [&](const std::string& a) { return s.count(a) > 0; })) ++n;
    }
    return make_rational(static_cast<long>(n), static_cast<long>(total));
  };

  std::vector<std::vector<std::string>> level;
  for (const auto& a : log.activities()) {
    Rational s = support({a});
    if (s >= min_support) {
      out.push_back({{a}, s});
      level.push_back({a});
    }
  }
  for (std::size_t k = 2; k <= max_size && !level.empty(); ++k) {
    std::set<std::vector<std::string>> previous(level.begin(), level.end());
    std::vector<std::vector<std::string>> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      for (std::size_t j = i + 1; j < level.size(); ++j) {
        if (!std::equal(level[i].begin(), level[i].end() - 1, level[j].begin())) continue;
        std::vector<std::string> cand = level[i];
        cand.push_back(level[j].back());
        bool closed = true;
        for (std::size_t drop = 0; drop < cand.size() && closed; ++drop) {
          std::vector<std::string> sub = cand;
          sub.erase(sub.begin() + static_cast<long>(drop));
          closed = previous.count(sub) > 0;
        }
        if (!closed) continue;
        Rational s = support(cand);
        if (s >= min_support) {
          out.push_back({cand, s});
          next.push_back(std::move(cand));
        }
      }
    }
    level = std::move(next);
  }
  return out;
}

Template make_template(std::string name, const Formula& body) {
  if (body.has_probability()) throw std::invalid_argument("template '" + name + "' uses P");
  auto vars = body.variables();
  std::size_t arity;
  if (vars == std::vector<std::string>{"x"}) {
    arity = 1;
  } else if (vars == std::vector<std::string>{"x", "y"}) {
    arity = 2;
  } else {
    throw std::invalid_argument("template '" + name + "' must use exactly the placeholders x or x and y");
  }
  return Template{std::move(name), arity, body};
}

std::vector<Template> default_templates() {
  return {
      make_template("existence", parse_formula("F x")),
      make_template("absence", parse_formula("!F x")),
      make_template("response", parse_formula("G(x -> F y)")),
      make_template("precedence", parse_formula("(!y U x) | G !y")),
  };
}

std::vector<Template> load_templates(const std::string& spec) {
  std::vector<Template> out;
  if (std::filesystem::is_regular_file(spec)) {
    std::ifstream in(spec);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (trim(line).empty()) continue;
      auto colon = line.find(':');
      if (colon == std::string::npos) {
        throw std::runtime_error(spec + ":" + std::to_string(line_no) + ": expected 'name : formula'");
      }
      try {
        out.push_back(make_template(trim(line.substr(0, colon)), parse_formula(line.substr(colon + 1))));
      } catch (const std::exception& e) {
        throw std::runtime_error(spec + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
    return out;
  }
  auto defaults = default_templates();
  std::stringstream ss(spec);
  std::string name;
  while (std::getline(ss, name, ',')) {
    name = trim(name);
    if (name.empty()) continue;
    auto it = std::find_if(defaults.begin(), defaults.end(), [&](const Template& t) { return t.name == name; });
    if (it == defaults.end()) throw std::runtime_error("unknown template '" + name + "'");
    out.push_back(*it);
  }
  return out;
}

std::size_t count_satisfying(const EventLog& log, const Formula& f) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < log.cases.size(); ++i) {
    if (eval_trace(f, log.trace(i))) ++n;
  }
  return n;
}

MiningResult mine(const EventLog& log, const Rational& min_support, const std::vector<Template>& catalog,
                  unsigned jobs) {
  MiningResult result;
  std::size_t max_arity = 1;
  for (const auto& t : catalog) max_arity = std::max(max_arity, t.arity);
  result.sets = frequent_sets(log, min_support, max_arity);

  std::vector<MinedConstraint> candidates;
  std::set<std::pair<std::string, std::vector<std::string>>> seen;
  for (const auto& t : catalog) {
    for (const auto& set : result.sets) {
      if (set.items.size() != t.arity) continue;
      std::vector<std::vector<std::string>> orders{set.items};
      if (t.arity == 2) orders.push_back({set.items[1], set.items[0]});
      for (auto& args : orders) {
        if (!seen.emplace(t.name, args).second) continue;
        Formula f = substitute(t.body, [&](const std::string& v) { return v == "x" ? args[0] : args[1]; });
        candidates.push_back({t.name, args, f, 0, log.cases.size()});
      }
    }
  }

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < candidates.size();) {
      candidates[i].satisfied = count_satisfying(log, candidates[i].formula);
    }
  };
  if (jobs > 1) {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  } else {
    work();
  }

  std::sort(candidates.begin(), candidates.end(), [](const MinedConstraint& a, const MinedConstraint& b) {
    return std::tie(a.template_name, a.args) < std::tie(b.template_name, b.args);
  });
  for (auto& c : candidates) {
    if (c.total == 0 || c.support() < min_support) continue;
    std::string note = "support=" + std::to_string(c.satisfied) + "/" + std::to_string(c.total) +
                       " template=" + c.template_name + "(";
    for (std::size_t k = 0; k < c.args.size(); ++k) {
      note += (k ? "," : "") + (is_plain_identifier(c.args[k]) ? c.args[k] : Formula::prop(c.args[k]).text());
    }
    note += ")";
    result.formula.constraints.push_back({Comparison::GE, c.support(), c.formula});
    result.formula.notes.push_back(note);
    result.formula.constraints.push_back({Comparison::LE, c.support(), c.formula});
    result.formula.notes.push_back("");
    result.mined.push_back(std::move(c));
  }
  return result;
}

}  // namespace pltlf
