#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "factorum/error.hpp"

namespace factorum {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Parses `-12`, `3.25`, `-.5`, or `7/3` into an exact rational.
/// Returns nullopt on malformed text or a zero denominator.
inline std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;

  auto parse_int = [](std::string_view s, bool allow_sign) -> std::optional<BigInt> {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    bool neg = false;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) {
      neg = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) return std::nullopt;
    BigInt value = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      value = value * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-value) : value;
  };

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = parse_int(text.substr(0, slash), true);
    auto den = parse_int(text.substr(slash + 1), false);
    if (!num || !den || *den == 0) return std::nullopt;
    return Rational(*num, *den);
  }

  bool neg = false;
  std::string_view body = text;
  if (body[0] == '-' || body[0] == '+') {
    neg = body[0] == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) return std::nullopt;
  auto dot = body.find('.');
  std::string_view whole = body.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (whole.empty() && frac.empty()) return std::nullopt;
  if (dot != std::string_view::npos && frac.empty()) return std::nullopt;

  BigInt num = 0;
  if (!whole.empty()) {
    auto w = parse_int(whole, false);
    if (!w) return std::nullopt;
    num = *w;
  }
  BigInt den = 1;
  for (char c : frac) {
    if (c < '0' || c > '9') return std::nullopt;
    num = num * 10 + (c - '0');
    den *= 10;
  }
  if (neg) num = -num;
  return Rational(num, den);
}

/// Canonical text: `p` for integers, `p/q` otherwise (q > 0, lowest terms).
inline std::string to_string(const Rational& r) {
  const BigInt& num = boost::multiprecision::numerator(r);
  const BigInt& den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Rational weights over a common denominator: weight[i] = numerators[i] / denominator.
struct ScaledWeights {
  BigInt denominator = 1;
  std::vector<BigInt> numerators;

  /// True when every numerator times `headroom` stays inside int64.
  bool fits_int64(const BigInt& headroom) const {
    BigInt total = 0;
    for (const auto& n : numerators) total += abs(n);
    return total * headroom < BigInt(std::numeric_limits<std::int64_t>::max());
  }

  std::vector<std::int64_t> as_int64() const {
    std::vector<std::int64_t> out;
    out.reserve(numerators.size());
    for (const auto& n : numerators) out.push_back(n.convert_to<std::int64_t>());
    return out;
  }
};

inline ScaledWeights scale_to_integers(std::span<const Rational> weights) {
  ScaledWeights out;
  for (const auto& w : weights) {
    out.denominator = boost::multiprecision::lcm(out.denominator,
                                                 boost::multiprecision::denominator(w));
  }
  out.numerators.reserve(weights.size());
  for (const auto& w : weights) {
    out.numerators.push_back(boost::multiprecision::numerator(w) *
                             (out.denominator / boost::multiprecision::denominator(w)));
  }
  return out;
}

}  // namespace factorum
