#pragma once

#include "twothree/int_matrix.hpp"
#include "twothree/integer.hpp"
#include "twothree/normal_form.hpp"
#include "twothree/prime.hpp"

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace twothree {

/// Weakly decreasing list of positive exponents r_1 >= r_2 >= ... >= 1.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<unsigned> parts) : parts_(std::move(parts)) {
    for (unsigned r : parts_)
      if (r == 0) throw std::invalid_argument("partition parts must be positive");
    std::sort(parts_.begin(), parts_.end(), std::greater<>());
  }

  const std::vector<unsigned>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  std::size_t size() const { return parts_.size(); }
  unsigned largest() const { return parts_.empty() ? 0 : parts_.front(); }
  std::uint64_t total() const {
    return std::accumulate(parts_.begin(), parts_.end(), std::uint64_t{0});
  }

  /// Multiset union.
  friend Partition operator+(const Partition& a, const Partition& b) {
    std::vector<unsigned> all = a.parts_;
    all.insert(all.end(), b.parts_.begin(), b.parts_.end());
    return Partition(std::move(all));
  }

  friend auto operator<=>(const Partition&, const Partition&) = default;
  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<unsigned> parts_;
};

/// Value of an Euler characteristic: a nonnegative integer or infinite.
class Chi {
 public:
  static constexpr Chi finite(std::uint64_t n) { return Chi(false, n); }
  static constexpr Chi infinite() { return Chi(true, 0); }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr std::uint64_t value() const {
    if (infinite_) throw std::logic_error("chi is infinite");
    return value_;
  }

  friend constexpr Chi operator+(Chi a, Chi b) {
    if (a.infinite_ || b.infinite_) return infinite();
    return finite(a.value_ + b.value_);
  }
  friend constexpr bool operator==(const Chi&, const Chi&) = default;

  std::string str() const { return infinite_ ? "INFINITE" : std::to_string(value_); }
  friend std::ostream& operator<<(std::ostream& os, const Chi& c) { return os << c.str(); }

 private:
  constexpr Chi(bool inf, std::uint64_t v) : infinite_(inf), value_(v) {}
  bool infinite_ = false;
  std::uint64_t value_ = 0;
};

/// Map from nonzero prime to chi_p; zero entries are never stored.
using LengthVector = std::map<Prime, std::uint64_t>;

/// Z^n modulo the column span of `relations` (an n-row matrix).
struct Presentation {
  std::size_t generators = 0;
  IntMatrix relations{0, 0};

  Presentation() = default;
  Presentation(std::size_t n, IntMatrix rel) : generators(n), relations(std::move(rel)) {
    if (relations.rows() != generators)
      throw std::invalid_argument("relation matrix must have one row per generator");
  }
  /// Diagonal presentation ⊕ Z/d_i (d_i = 0 gives a free generator).
  static Presentation diagonal(const std::vector<Integer>& orders) {
    return {orders.size(), IntMatrix::diagonal(orders)};
  }

  friend bool operator==(const Presentation&, const Presentation&) = default;
};

inline Presentation direct_sum(const Presentation& a, const Presentation& b) {
  return {a.generators + b.generators, block_diagonal(a.relations, b.relations)};
}

/// A finitely generated abelian group in structure-theorem form: free rank plus
/// one partition of exponents per prime. Equality is isomorphism.
class FGModule {
 public:
  FGModule() = default;
  FGModule(std::uint64_t rank, std::map<Prime, Partition> torsion) : rank_(rank) {
    for (auto& [p, part] : torsion) {
      if (p.is_generic()) throw std::invalid_argument("torsion at the generic prime");
      if (!part.empty()) torsion_.emplace(p, std::move(part));
    }
  }

  static FGModule zero() { return {}; }
  static FGModule free(std::uint64_t rank) { return {rank, {}}; }
  static FGModule cyclic(Prime p, unsigned exponent) {
    if (exponent == 0) return zero();
    return {0, {{p, Partition({exponent})}}};
  }
  /// Elementary module ⊕_p (Z/p)^{v_p}.
  static FGModule elementary(const LengthVector& v) {
    std::map<Prime, Partition> t;
    for (auto [p, n] : v)
      if (n) t.emplace(p, Partition(std::vector<unsigned>(n, 1u)));
    return {0, std::move(t)};
  }

  std::uint64_t rank() const { return rank_; }
  const std::map<Prime, Partition>& torsion() const { return torsion_; }
  bool is_zero() const { return rank_ == 0 && torsion_.empty(); }
  bool is_torsion() const { return rank_ == 0; }
  bool is_finite() const { return rank_ == 0; }

  /// The p-partition; empty when there is no p-torsion.
  Partition partition(Prime p) const {
    auto it = torsion_.find(p);
    return it == torsion_.end() ? Partition() : it->second;
  }
  std::vector<Prime> torsion_primes() const {
    std::vector<Prime> out;
    for (const auto& [p, part] : torsion_) out.push_back(p);
    return out;
  }
  /// Every torsion prime is `p`.
  bool is_p_torsion(Prime p) const {
    return rank_ == 0 && (torsion_.empty() || (torsion_.size() == 1 && torsion_.begin()->first == p));
  }

  FGModule torsion_part() const { return {0, torsion_}; }
  FGModule free_part() const { return free(rank_); }
  FGModule p_part(Prime p) const {
    auto it = torsion_.find(p);
    if (it == torsion_.end()) return zero();
    return {0, {{p, it->second}}};
  }
  /// Everything except the p-primary part.
  FGModule without_prime(Prime p) const {
    auto t = torsion_;
    t.erase(p);
    return {rank_, std::move(t)};
  }

  /// Group order; throws for infinite modules.
  Integer order() const {
    if (rank_ != 0) throw std::logic_error("order of an infinite module");
    Integer n = 1;
    for (const auto& [p, part] : torsion_) n *= prime_power(p, static_cast<unsigned>(part.total()));
    return n;
  }

  /// Cyclic factor orders in canonical summand order: free (0) first, then
  /// primes ascending with exponents descending.
  std::vector<Integer> cyclic_orders() const {
    std::vector<Integer> out(rank_, Integer(0));
    for (const auto& [p, part] : torsion_)
      for (unsigned r : part.parts()) out.push_back(prime_power(p, r));
    return out;
  }

  friend auto operator<=>(const FGModule&, const FGModule&) = default;
  friend bool operator==(const FGModule&, const FGModule&) = default;

 private:
  std::uint64_t rank_ = 0;
  std::map<Prime, Partition> torsion_;
};

inline FGModule direct_sum(const FGModule& a, const FGModule& b) {
  std::map<Prime, Partition> t = a.torsion();
  for (const auto& [p, part] : b.torsion()) t[p] = t[p] + part;
  return {a.rank() + b.rank(), std::move(t)};
}

/// n-fold direct sum.
inline FGModule power(const FGModule& a, std::uint64_t n) {
  FGModule out;
  for (std::uint64_t i = 0; i < n; ++i) out = direct_sum(out, a);
  return out;
}

inline Chi chi(const FGModule& x, Prime p) {
  if (p.is_generic()) return Chi::finite(x.rank());
  if (x.rank() > 0) return Chi::infinite();
  return Chi::finite(x.partition(p).total());
}

inline LengthVector length_vector(const FGModule& x) {
  if (x.rank() > 0)
    throw std::domain_error("length vector is undefined for a module of positive rank");
  LengthVector v;
  for (const auto& [p, part] : x.torsion()) v[p] = part.total();
  return v;
}

/// Split a composite modulus into prime-power cyclic summands.
inline FGModule cyclic_module(const Integer& n) {
  if (n == 0) return FGModule::free(1);
  if (n < 0) return cyclic_module(-n);
  std::map<Prime, Partition> t;
  if (n > 1)
    for (auto [p, e] : factorize(n)) t[p] = Partition({e});
  return {0, std::move(t)};
}

inline FGModule from_presentation(const Presentation& pres) {
  if (pres.relations.rows() != pres.generators)
    throw std::invalid_argument("presentation relation rows must equal generator count");
  SNFResult snf = smith_normal_form(pres.relations);
  FGModule out;
  const std::size_t k = std::min(pres.relations.rows(), pres.relations.cols());
  out = FGModule::free(pres.generators - k);
  for (std::size_t i = 0; i < k; ++i) out = direct_sum(out, cyclic_module(snf.D(i, i)));
  return out;
}

/// One generator per summand in canonical order, diagonal relations.
inline Presentation to_presentation(const FGModule& x) {
  return Presentation::diagonal(x.cyclic_orders());
}

inline std::string to_string(const FGModule& x) {
  if (x.is_zero()) return "0";
  std::string out;
  auto add = [&](const std::string& term) {
    if (!out.empty()) out += " + ";
    out += term;
  };
  if (x.rank() == 1) add("Z");
  else if (x.rank() > 1) add("Z^" + std::to_string(x.rank()));
  for (const auto& [p, part] : x.torsion())
    for (unsigned r : part.parts()) add("Z/" + prime_power(p, r).str());
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const FGModule& x) { return os << to_string(x); }

inline std::string to_string(const LengthVector& v) {
  std::string out = "{";
  bool first = true;
  for (auto [p, n] : v) {
    out += (first ? "" : ", ") + p.str() + ": " + std::to_string(n);
    first = false;
  }
  return out + "}";
}

/// Raised for malformed module expressions.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class ModuleParser {
 public:
  explicit ModuleParser(std::string_view text) : text_(text) {}

  FGModule parse() {
    FGModule m = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return m;
  }

 private:
  FGModule expr() {
    skip_ws();
    if (peek() == '0') {
      ++pos_;
      return FGModule::zero();
    }
    FGModule m = term();
    for (;;) {
      skip_ws();
      if (peek() != '+') return m;
      ++pos_;
      m = direct_sum(m, term());
    }
  }

  FGModule term() {
    skip_ws();
    char c = peek();
    if (c == '(') {
      ++pos_;
      FGModule inner = expr();
      skip_ws();
      expect(')');
      skip_ws();
      expect('^');
      return power(inner, nat());
    }
    if (c != 'Z') fail("expected 'Z', '(' or '0'");
    ++pos_;
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      return FGModule::free(nat());
    }
    if (peek() == '/') {
      ++pos_;
      std::uint64_t n = nat();
      if (n == 1) fail("Z/1 is the zero summand; write 0 or omit it");
      if (n > (std::uint64_t{1} << 63)) fail("modulus exceeds 2^63");
      return cyclic_module(Integer(n));
    }
    return FGModule::free(1);
  }

  std::uint64_t nat() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a positive integer");
    std::string digits(text_.substr(start, pos_ - start));
    if (digits.size() > 19) fail("integer too large: " + digits);
    std::uint64_t v = std::stoull(digits);
    if (v == 0) fail("expected a positive integer, got 0");
    return v;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("module expression: " + what + " at offset " + std::to_string(pos_) +
                     " in \"" + std::string(text_) + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Grammar:  expr := term ("+" term)* | "0"
///           term := "Z" | "Z^" nat | "Z/" nat | "(" expr ")^" nat
inline FGModule parse_module(std::string_view text) {
  return detail::ModuleParser(text).parse();
}

}  // namespace twothree

template <>
struct std::hash<twothree::FGModule> {
  std::size_t operator()(const twothree::FGModule& m) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(m.rank());
    for (const auto& [p, part] : m.torsion()) {
      h = h * 1000003u ^ std::hash<std::uint64_t>{}(p.value());
      for (unsigned r : part.parts()) h = h * 31u + r;
    }
    return h;
  }
};
