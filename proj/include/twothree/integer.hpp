#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twothree {

using Integer = boost::multiprecision::cpp_int;

inline Integer abs(const Integer& x) { return x < 0 ? Integer(-x) : x; }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(abs(a), abs(b));
}

/// gcd of absolute values; the empty list has gcd 0.
inline Integer gcd_list(std::span<const Integer> values) {
  Integer g = 0;
  for (const auto& v : values) g = gcd(g, v);
  return g;
}

/// Floor division: the quotient rounds toward negative infinity.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  Integer r = a - q * b;
  if (r != 0 && ((r < 0) != (b < 0))) --q;
  return q;
}

inline std::string to_string(const Integer& x) { return x.str(); }

inline Integer parse_integer(std::string_view text) {
  std::size_t i = 0;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
  if (i == text.size()) throw std::invalid_argument("empty integer literal");
  for (std::size_t j = i; j < text.size(); ++j)
    if (text[j] < '0' || text[j] > '9')
      throw std::invalid_argument("bad integer literal: " + std::string(text));
  return Integer(std::string(text));
}

/// Narrowing conversion; throws when the value does not fit.
inline std::uint64_t to_u64(const Integer& x) {
  if (x < 0 || x > std::numeric_limits<std::uint64_t>::max())
    throw std::overflow_error("integer out of 64-bit range: " + x.str());
  return x.convert_to<std::uint64_t>();
}

}  // namespace twothree
