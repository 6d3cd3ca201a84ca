#include "pltlf/trace.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace pltlf {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

using Truth = std::vector<char>;

Truth evaluate(const Formula& f, const Trace& t) {
  const std::size_t n = t.size();
  Truth out(n, 0);
  switch (f.op()) {
    case Op::Prop:
      for (std::size_t i = 0; i < n; ++i) out[i] = t[i].count(f.name()) > 0;
      break;
    case Op::True:
      std::fill(out.begin(), out.end(), 1);
      break;
    case Op::False:
      break;
    case Op::Not: {
      Truth x = evaluate(f[0], t);
      for (std::size_t i = 0; i < n; ++i) out[i] = !x[i];
      break;
    }
    case Op::And: {
      std::fill(out.begin(), out.end(), 1);
      for (const auto& c : f.children()) {
        Truth x = evaluate(c, t);
        for (std::size_t i = 0; i < n; ++i) out[i] = out[i] && x[i];
      }
      break;
    }
    case Op::Or: {
      Truth l = evaluate(f[0], t), r = evaluate(f[1], t);
      for (std::size_t i = 0; i < n; ++i) out[i] = l[i] || r[i];
      break;
    }
    case Op::Implies: {
      Truth l = evaluate(f[0], t), r = evaluate(f[1], t);
      for (std::size_t i = 0; i < n; ++i) out[i] = !l[i] || r[i];
      break;
    }
    case Op::Next: {
      Truth x = evaluate(f[0], t);
      for (std::size_t i = 0; i + 1 < n; ++i) out[i] = x[i + 1];
      break;
    }
    case Op::Until: {
      Truth l = evaluate(f[0], t), r = evaluate(f[1], t);
      for (std::size_t i = n; i-- > 0;) out[i] = r[i] || (l[i] && i + 1 < n && out[i + 1]);
      break;
    }
    case Op::Eventually: {
      Truth x = evaluate(f[0], t);
      for (std::size_t i = n; i-- > 0;) out[i] = x[i] || (i + 1 < n && out[i + 1]);
      break;
    }
    case Op::Always: {
      Truth x = evaluate(f[0], t);
      for (std::size_t i = n; i-- > 0;) out[i] = x[i] && (i + 1 == n || out[i + 1]);
      break;
    }
    case Op::Prob:
      throw std::invalid_argument("not an LTLf formula: " + f.text());
  }
  return out;
}

}  // namespace

Valuation parse_valuation(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw std::invalid_argument("empty valuation (use '-' for no variables)");
  Valuation v;
  if (text == "-") return v;
  while (true) {
    auto comma = text.find(',');
    auto name = trim(text.substr(0, comma));
    if (name.empty() || name == "-") {
      throw std::invalid_argument("malformed valuation '" + std::string(text) + "'");
    }
    v.emplace(name);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return v;
}

Trace parse_trace(std::string_view text) {
  Trace t;
  if (trim(text).empty()) return t;
  while (true) {
    auto semi = text.find(';');
    t.push_back(parse_valuation(text.substr(0, semi)));
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  return t;
}

std::string format_valuation(const Valuation& v) {
  if (v.empty()) return "-";
  std::string out;
  for (const auto& name : v) {
    if (!out.empty()) out += ',';
    out += name;
  }
  return out;
}

std::string format_trace(const Trace& t) {
  std::string out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ';';
    out += format_valuation(t[i]);
  }
  return out;
}

bool eval_trace(const Formula& f, const Trace& t) {
  if (t.empty()) throw std::invalid_argument("empty trace");
  return evaluate(f, t)[0] != 0;
}

Valuation project(const Valuation& v, const std::vector<std::string>& vars) {
  Valuation out;
  for (const auto& name : vars) {
    if (v.count(name)) out.insert(name);
  }
  return out;
}

}  // namespace pltlf
