#pragma once

#include "twothree/integer.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twothree {

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the base set is exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// A prime ideal of the integers: the generic point (0) or a positive prime.
class Prime {
 public:
  constexpr Prime() = default;

  static constexpr Prime generic() { return Prime(); }
  static Prime of(std::uint64_t value) {
    if (value != 0 && !is_prime(value))
      throw std::invalid_argument("not a prime: " + std::to_string(value));
    return Prime(value);
  }

  constexpr std::uint64_t value() const { return value_; }
  constexpr bool is_generic() const { return value_ == 0; }

  friend constexpr auto operator<=>(const Prime&, const Prime&) = default;

  std::string str() const { return std::to_string(value_); }

 private:
  constexpr explicit Prime(std::uint64_t v) : value_(v) {}
  std::uint64_t value_ = 0;
};

inline Prime parse_prime(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad prime: " + text);
  }
  if (used != text.size()) throw std::invalid_argument("bad prime: " + text);
  return Prime::of(v);
}

/// Prime factorization by trial division, stopping as soon as the cofactor
/// is prime. Returns (prime, exponent) pairs with primes ascending.
inline std::vector<std::pair<Prime, unsigned>> factorize(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("cannot factor 0");
  std::vector<std::pair<Prime, unsigned>> out;
  auto take = [&](std::uint64_t p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(Prime::of(p), e);
    return e != 0;
  };
  take(2);
  bool cofactor_prime = n > 1 && is_prime(n);
  for (std::uint64_t p = 3; n > 1; p += 2) {
    if (cofactor_prime || p > n / p) {
      out.emplace_back(Prime::of(n), 1u);
      break;
    }
    if (take(p)) cofactor_prime = n > 1 && is_prime(n);
  }
  return out;
}

inline std::vector<std::pair<Prime, unsigned>> factorize(const Integer& n) {
  return factorize(to_u64(n));
}

/// p^e as an arbitrary-precision integer.
inline Integer prime_power(Prime p, unsigned e) {
  return boost::multiprecision::pow(Integer(p.value()), e);
}

}  // namespace twothree

template <>
struct std::hash<twothree::Prime> {
  std::size_t operator()(const twothree::Prime& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.value());
  }
};
