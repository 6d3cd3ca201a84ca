#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace pltlf {

/// Exact rational number. GMP keeps every value canonical (lowest terms,
/// positive denominator) after arithmetic; parse_rational canonicalizes input.
using Rational = mpq_class;

/// Accepts integers, decimals ("0.6", ".5") and fractions ("3/5").
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Always "num/den", e.g. "1/2", "0/1", "1/1".
std::string to_fraction_string(const Rational& value);

/// Shortest exact rendering: "0", "1", "3/5".
std::string to_compact_string(const Rational& value);

/// Terminating decimals as decimals ("0.6"), everything else as "num/den".
std::string to_display_string(const Rational& value);

/// num/den in lowest terms. Throws std::invalid_argument when den is 0.
Rational make_rational(long num, long den);

double to_double(const Rational& value);

bool is_probability(const Rational& value);

enum class Comparison { LE, GE, LT, GT };

/// LE <-> GT, GE <-> LT; the comparison satisfied exactly when the original is not.
constexpr Comparison inverse(Comparison c) {
  switch (c) {
    case Comparison::LE: return Comparison::GT;
    case Comparison::GT: return Comparison::LE;
    case Comparison::GE: return Comparison::LT;
    case Comparison::LT: return Comparison::GE;
  }
  return c;
}

constexpr bool is_strict(Comparison c) { return c == Comparison::LT || c == Comparison::GT; }

std::string_view symbol(Comparison c);

/// lhs ⋈ rhs
bool holds(Comparison c, const Rational& lhs, const Rational& rhs);

}  // namespace pltlf
