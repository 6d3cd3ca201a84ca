#include "cli.hpp"

#include "pltlf/mining.hpp"
#include "pltlf/pltlf0.hpp"
#include "pltlf/weighted.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

namespace pltlf::cli {

namespace {

using json = nlohmann::ordered_json;

json rational(const Rational& r) { return json{{"value", to_fraction_string(r)}, {"decimal", to_double(r)}}; }

json trace_list(const std::vector<Trace>& traces) {
  json out = json::array();
  for (const auto& t : traces) out.push_back(format_trace(t));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Trace checked_trace(const std::string& text, const std::vector<std::string>& vars) {
  Trace t = parse_trace(text);
  for (const auto& v : t) {
    for (const auto& name : v) {
      if (!std::binary_search(vars.begin(), vars.end(), name)) {
        throw std::invalid_argument("variable '" + name + "' does not occur in the formula");
      }
    }
  }
  return t;
}

struct Options {
  bool pretty = false;
  bool timing = false;
  unsigned jobs = 1;

  std::string formula;
  std::string file;
  std::string dump;
  std::size_t edges = 20;
  std::size_t count = 5;
  std::size_t max_length = 10;
  std::string trace;
  std::string nfa;
  std::string prefix;
  std::string property;
  std::string log;
  std::string min_support = "0.5";
  std::string templates = "existence,absence,response,precedence";
};

class Driver {
 public:
  Driver(const Options& o, std::istream& in, std::ostream& out) : o_(o), in_(in), out_(out) {}

  int sat() {
    Formula f = parse_formula(o_.formula);
    TreeAutomaton a(f);
    spdlog::debug("automaton for {} has {} states", f.text(), a.state_count());
    bool yes = !a.is_empty();
    json r;
    r["satisfiable"] = yes;
    r["closure_size"] = a.closure().size();
    r["states"] = a.state_count();
    r["good_states"] = a.good_states().good.count();
    r["sweeps"] = a.good_states().sweeps;
    if (o_.dump == "json") r["automaton"] = a.reduce().to_json(o_.edges);
    if (o_.dump == "text") r["automaton"] = a.reduce().to_text(o_.edges);
    emit("sat", {{"formula", f.text()}}, yes ? "satisfiable" : "unsatisfiable", r);
    return yes ? 0 : 1;
  }

  int model() {
    Formula f = parse_formula(o_.formula);
    auto m = witness_model(f);
    json r;
    r["satisfiable"] = m.has_value();
    if (m) {
      r["nodes"] = m->size();
      r["depth"] = m->depth();
      r["verified"] = check_model(*m, f);
      r["model"] = to_json(*m);
    }
    emit("model", {{"formula", f.text()}}, m ? "satisfiable" : "unsatisfiable", r);
    return m ? 0 : 1;
  }

  int mlt() {
    Formula f = parse_formula(o_.formula);
    Analysis a(f);
    Rational p = a.value();
    json r;
    r["probability"] = rational(p);
    r["traces"] = p > 0 ? trace_list(enumerate_mlts(a.acceptor(), o_.count, o_.max_length)) : json::array();
    emit("mlt", {{"formula", f.text()}, {"count", o_.count}, {"max_length", o_.max_length}},
         p > 0 ? "ok" : "unsatisfiable", r);
    return p > 0 ? 0 : 1;
  }

  int prob() {
    Formula f = parse_formula(o_.formula);
    if (o_.trace.empty() == o_.nfa.empty()) throw CLI::ValidationError("prob needs exactly one of --trace and --nfa");
    Analysis a(f);
    json input{{"formula", f.text()}};
    json r;
    Rational p;
    if (!o_.trace.empty()) {
      Trace t = checked_trace(o_.trace, a.weighted().variables);
      if (t.empty()) throw std::invalid_argument("a trace needs at least one step");
      input["trace"] = format_trace(t);
      p = a.trace_probability(t);
      r["probability"] = rational(p);
    } else {
      TraceNFA nfa = TraceNFA::from_json(nlohmann::json::parse(read_file(o_.nfa)));
      input["nfa"] = o_.nfa;
      auto res = a.language(nfa);
      p = res.probability;
      r["probability"] = rational(p);
      r["traces"] = p > 0 ? trace_list(enumerate_mlts(res.acceptor, o_.count, o_.max_length)) : json::array();
    }
    emit("prob", input, p > 0 ? "ok" : "zero", r);
    return p > 0 ? 0 : 1;
  }

  int prefix() {
    Formula f = parse_formula(o_.formula);
    Analysis a(f);
    Trace t = checked_trace(o_.prefix, a.weighted().variables);
    auto res = a.prefix(t);
    json r;
    r["probability"] = rational(res.probability);
    r["extensions"] = res.probability > 0
                          ? trace_list(enumerate_mlts(res.acceptor, o_.count, t.size() + o_.max_length))
                          : json::array();
    emit("prefix", {{"formula", f.text()}, {"prefix", format_trace(t)}, {"count", o_.count}},
         res.probability > 0 ? "ok" : "zero", r);
    return res.probability > 0 ? 0 : 1;
  }

  int p0_sat() {
    Pltlf0Formula phi = load_pltlf0(o_.file);
    ScenarioTable t = build_lphi(phi);
    json r;
    r["satisfiable"] = t.feasible;
    r["scenarios"] = scenarios(phi, t, false);
    r["system"] = rows(t.system);
    if (t.feasible) {
      json w;
      for (std::size_t i = 0; i < t.count(); ++i) w["x" + scenario_name(i, t.n)] = rational(t.witness[i]);
      r["witness"] = w;
    }
    emit("p0-sat", {{"file", o_.file}, {"constraints", phi.size()}}, t.feasible ? "satisfiable" : "unsatisfiable", r);
    return t.feasible ? 0 : 1;
  }

  int p0_scenarios() {
    Pltlf0Formula phi = load_pltlf0(o_.file);
    ScenarioTable t = build_lphi(phi);
    json r;
    r["satisfiable"] = t.feasible;
    if (t.feasible) {
      t = scenario_maxima(phi, o_.jobs);
      long best = most_likely_index(t, t.satisfiable);
      r["most_likely"] = best < 0 ? json(nullptr) : json(scenario_name(static_cast<std::size_t>(best), t.n));
    }
    r["scenarios"] = scenarios(phi, t, t.feasible);
    r["system"] = rows(t.system);
    emit("p0-scenarios", {{"file", o_.file}, {"constraints", phi.size()}},
         t.feasible ? "satisfiable" : "unsatisfiable", r);
    return t.feasible ? 0 : 1;
  }

  int p0_monitor() {
    Pltlf0Formula phi = load_pltlf0(o_.file);
    std::optional<Formula> property;
    if (!o_.property.empty()) property = parse_formula(o_.property);
    MonitorState m = MonitorState::start(phi, property, o_.jobs);
    std::string line;
    std::size_t step = 0;
    while (std::getline(in_, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      m = m.step(parse_valuation(line));
      ++step;
      json e;
      e["step"] = step;
      e["scenario_index"] = m.best();
      e["scenario"] = m.best() < 0 ? json(nullptr) : json(scenario_name(static_cast<std::size_t>(m.best()), phi.size()));
      e["scenario_description"] =
          m.best() < 0 ? json(nullptr) : json(scenario_description(phi, static_cast<std::size_t>(m.best())));
      e["probability"] = to_fraction_string(m.probability());
      e["violated"] = m.violated();
      out_ << e.dump() << '\n';
      out_.flush();
    }
    return m.violated() ? 1 : 0;
  }

  int mine_log() {
    EventLog log = load_log(o_.log);
    Rational min = parse_rational(o_.min_support);
    if (!is_probability(min)) throw std::invalid_argument("--min-support must lie in [0,1]");
    auto catalog = load_templates(o_.templates);
    MiningResult r = mine(log, min, catalog, o_.jobs);
    out_ << "# mined from " << log.cases.size() << " cases, min support " << to_compact_string(min) << "\n";
    out_ << format_pltlf0(r.formula);
    return 0;
  }

  void start_clock() { start_ = std::chrono::steady_clock::now(); }

 private:
  json scenarios(const Pltlf0Formula& phi, const ScenarioTable& t, bool maxima) {
    json out = json::array();
    for (std::size_t i = 0; i < t.count(); ++i) {
      json s;
      s["index"] = i;
      s["name"] = scenario_name(i, t.n);
      s["description"] = scenario_description(phi, i);
      s["satisfiable"] = t.satisfiable[i] != 0;
      if (maxima) {
        s["maximum"] = rational(t.maxima[i]);
        s["attained"] = t.attained[i] != 0;
      }
      out.push_back(std::move(s));
    }
    return out;
  }

  static json rows(const LinearSystem& sys) {
    json out = json::array();
    std::istringstream ss(sys.to_string());
    std::string line;
    while (std::getline(ss, line)) out.push_back(line);
    return out;
  }

  void emit(const std::string& command, json input, const std::string& status, json result) {
    json env;
    env["command"] = command;
    env["input"] = std::move(input);
    env["status"] = status;
    env["result"] = std::move(result);
    if (o_.timing) {
      env["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count()}};
    }
    out_ << (o_.pretty ? env.dump(2) : env.dump()) << '\n';
  }

  const Options& o_;
  std::istream& in_;
  std::ostream& out_;
  std::chrono::steady_clock::time_point start_;
};

void configure_logging(std::ostream& err) {
  static std::shared_ptr<spdlog::logger> logger;
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  logger = std::make_shared<spdlog::logger>("pltlf", sink);
  logger->set_pattern("[%l] %v");
  spdlog::level::level_enum level = spdlog::level::warn;
  if (const char* env = std::getenv("PLTLF_LOG")) level = spdlog::level::from_str(env);
  logger->set_level(level);
  spdlog::set_default_logger(logger);
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  configure_logging(err);
  Options o;
  CLI::App app{"Reasoner for probabilistic LTL over finite traces", "pltlf"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--pretty", o.pretty, "Indent JSON output");
  app.add_flag("--timing", o.timing, "Add wall-clock timing to the output");
  app.add_option("--jobs", o.jobs, "Worker threads for independent LPs and support counts")
      ->check(CLI::Range(1U, 256U));

  auto formula_arg = [&](CLI::App* sub) { sub->add_option("formula", o.formula, "PLTLf formula")->required(); };
  auto count_opts = [&](CLI::App* sub) {
    sub->add_option("--count", o.count, "Number of traces to list")->check(CLI::Range(1UL, 100000UL));
    sub->add_option("--max-length", o.max_length, "Longest trace (or extension) to list")
        ->check(CLI::Range(1UL, 1000UL));
  };

  auto* sat = app.add_subcommand("sat", "Decide satisfiability");
  formula_arg(sat);
  sat->add_option("--dump-automaton", o.dump, "Include the reduced automaton")->check(CLI::IsMember({"text", "json"}));
  sat->add_option("--edges", o.edges, "Hyperedges listed per state in dumps");

  auto* model = app.add_subcommand("model", "Build a model witness");
  formula_arg(model);

  auto* mlt = app.add_subcommand("mlt", "Most likely traces");
  formula_arg(mlt);
  count_opts(mlt);

  auto* prob = app.add_subcommand("prob", "Probability of a trace or of a trace language");
  formula_arg(prob);
  prob->add_option("--trace", o.trace, "Trace, e.g. \"-;a;b\"");
  prob->add_option("--nfa", o.nfa, "JSON automaton file")->check(CLI::ExistingFile);
  count_opts(prob);

  auto* prefix = app.add_subcommand("prefix", "Most likely extensions of a prefix");
  formula_arg(prefix);
  prefix->add_option("--prefix", o.prefix, "Observed prefix")->required();
  count_opts(prefix);

  auto* p0sat = app.add_subcommand("p0-sat", "Satisfiability of a PLTLf0 file");
  p0sat->add_option("file", o.file)->required()->check(CLI::ExistingFile);
  auto* p0sc = app.add_subcommand("p0-scenarios", "Scenario maxima of a PLTLf0 file");
  p0sc->add_option("file", o.file)->required()->check(CLI::ExistingFile);
  auto* p0mon = app.add_subcommand("p0-monitor", "Monitor valuations read from stdin");
  p0mon->add_option("file", o.file)->required()->check(CLI::ExistingFile);
  p0mon->add_option("--property", o.property, "LTLf property for eventual satisfaction");

  auto* minecmd = app.add_subcommand("mine", "Mine PLTLf0 constraints from an event log");
  minecmd->add_option("--log", o.log, "CSV event log")->required()->check(CLI::ExistingFile);
  minecmd->add_option("--min-support", o.min_support, "Minimum support");
  minecmd->add_option("--templates", o.templates, "Template names (comma-separated) or a template file");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  Driver d(o, in, out);
  d.start_clock();
  try {
    if (*sat) return d.sat();
    if (*model) return d.model();
    if (*mlt) return d.mlt();
    if (*prob) return d.prob();
    if (*prefix) return d.prefix();
    if (*p0sat) return d.p0_sat();
    if (*p0sc) return d.p0_scenarios();
    if (*p0mon) return d.p0_monitor();
    if (*minecmd) return d.mine_log();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

}  // namespace pltlf::cli
