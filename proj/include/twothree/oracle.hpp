#pragma once

#include "twothree/fg_module.hpp"
#include "twothree/prime.hpp"
#include "twothree/ses.hpp"
#include "twothree/subcat.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twothree {

/// Finite window on the category: torsion supported on `primes`, rank and
/// per-prime length capped. `max_order` caps |B| for subgroup enumeration.
struct UniverseBounds {
  std::vector<Prime> primes;
  std::uint64_t max_rank = 0;
  unsigned max_length_per_prime = 0;
  std::uint64_t max_order = 144;

  bool contains(const FGModule& m) const {
    if (m.rank() > max_rank) return false;
    for (const auto& [p, part] : m.torsion()) {
      if (!std::binary_search(primes.begin(), primes.end(), p)) return false;
      if (part.total() > max_length_per_prime) return false;
    }
    return true;
  }
};

/// Desk-scale defaults: primes {2,3}, rank <= 2, length <= 3, |B| <= 144.
inline UniverseBounds default_bounds() {
  return {{Prime::of(2), Prime::of(3)}, 2, 3, 144};
}

/// Partitions of 0..n, ordered by total and then lexicographically descending.
inline std::vector<Partition> partitions_up_to(unsigned n) {
  std::vector<Partition> out;
  std::vector<unsigned> cur;
  std::function<void(unsigned, unsigned)> rec = [&](unsigned left, unsigned cap) {
    if (left == 0) {
      out.emplace_back(cur);
      return;
    }
    for (unsigned r = std::min(left, cap); r >= 1; --r) {
      cur.push_back(r);
      rec(left - r, r);
      cur.pop_back();
    }
  };
  for (unsigned total = 0; total <= n; ++total) rec(total, total);
  return out;
}

/// Every module within bounds exactly once: rank ascending, then per-prime
/// partitions with the first prime varying fastest.
inline std::vector<FGModule> enumerate_modules(const UniverseBounds& b) {
  const std::vector<Partition> parts = partitions_up_to(b.max_length_per_prime);
  std::vector<FGModule> out;
  const std::size_t k = b.primes.size();
  for (std::uint64_t r = 0; r <= b.max_rank; ++r) {
    std::vector<std::size_t> digit(k, 0);
    for (;;) {
      std::map<Prime, Partition> t;
      for (std::size_t i = 0; i < k; ++i) t.emplace(b.primes[i], parts[digit[i]]);
      out.emplace_back(r, std::move(t));
      std::size_t i = 0;
      while (i < k && ++digit[i] == parts.size()) digit[i++] = 0;
      if (i == k) break;
    }
  }
  return out;
}

/// Explicit group law of a finite abelian group ⊕ Z/m_i, elements encoded in
/// mixed radix with the first factor least significant.
class FiniteGroupTable {
 public:
  explicit FiniteGroupTable(const FGModule& x) : module_(x) {
    if (x.rank() != 0) throw std::domain_error("group table needs a finite module");
    for (const auto& o : x.cyclic_orders()) factors_.push_back(to_u64(o));
    size_ = 1;
    for (auto m : factors_) size_ *= m;
    for (const auto& [p, part] : x.torsion()) primes_.push_back(p.value());
  }

  const FGModule& module() const { return module_; }
  std::uint64_t size() const { return size_; }
  const std::vector<std::uint64_t>& factors() const { return factors_; }
  const std::vector<std::uint64_t>& primes() const { return primes_; }

  std::vector<std::uint64_t> digits(std::uint64_t e) const {
    std::vector<std::uint64_t> d(factors_.size());
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      d[i] = e % factors_[i];
      e /= factors_[i];
    }
    return d;
  }
  std::uint64_t encode(const std::vector<std::uint64_t>& d) const {
    std::uint64_t e = 0;
    for (std::size_t i = factors_.size(); i-- > 0;) e = e * factors_[i] + d[i];
    return e;
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t out = 0, scale = 1;
    for (auto m : factors_) {
      out += ((a % m + b % m) % m) * scale;
      a /= m;
      b /= m;
      scale *= m;
    }
    return out;
  }
  /// n * a
  std::uint64_t scale(std::uint64_t a, std::uint64_t n) const {
    std::uint64_t out = 0, s = 1;
    for (auto m : factors_) {
      out += static_cast<std::uint64_t>((static_cast<unsigned __int128>(a % m) * n) % m) * s;
      a /= m;
      s *= m;
    }
    return out;
  }

 private:
  FGModule module_;
  std::vector<std::uint64_t> factors_;
  std::vector<std::uint64_t> primes_;
  std::uint64_t size_ = 1;
};

/// (isomorphism type of U, isomorphism type of X/U) for one subgroup U.
struct SubgroupType {
  FGModule sub;
  FGModule quotient;

  friend auto operator<=>(const SubgroupType&, const SubgroupType&) = default;
};

namespace detail {

class ElementSet {
 public:
  explicit ElementSet(std::uint64_t n) : words_((n + 63) / 64, 0) {}
  bool has(std::uint64_t e) const { return (words_[e / 64] >> (e % 64)) & 1u; }
  void add(std::uint64_t e) { words_[e / 64] |= std::uint64_t{1} << (e % 64); }
  const std::vector<std::uint64_t>& words() const { return words_; }
  friend auto operator<=>(const ElementSet&, const ElementSet&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

/// Invariant type of a finite abelian group from the sizes of its
/// p^k-torsion subgroups: #parts >= k equals log_p |G[p^k]| - log_p |G[p^(k-1)]|.
inline FGModule type_from_torsion_counts(
    const std::map<std::uint64_t, std::vector<std::uint64_t>>& counts) {
  std::map<Prime, Partition> t;
  for (const auto& [p, sizes] : counts) {
    std::vector<unsigned> logs;
    for (auto s : sizes) {
      unsigned l = 0;
      while (s > 1) {
        s /= p;
        ++l;
      }
      logs.push_back(l);
    }
    // logs[k] = log_p |G[p^k]|, logs[0] = 0.
    std::vector<unsigned> parts;
    for (std::size_t k = 1; k < logs.size(); ++k) {
      unsigned at_least_k = logs[k] - logs[k - 1];
      unsigned at_least_next = k + 1 < logs.size() ? logs[k + 1] - logs[k] : 0;
      for (unsigned c = at_least_next; c < at_least_k; ++c) parts.push_back(static_cast<unsigned>(k));
    }
    if (!parts.empty()) t.emplace(Prime::of(p), Partition(parts));
  }
  return {0, std::move(t)};
}

inline SubgroupType classify_subgroup(const FiniteGroupTable& x, const std::vector<std::uint64_t>& elems,
                                      const ElementSet& in_u) {
  std::map<std::uint64_t, std::vector<std::uint64_t>> sub_counts, quot_counts;
  for (auto p : x.primes()) {
    unsigned max_e = x.module().partition(Prime::of(p)).largest();
    auto& sc = sub_counts[p];
    auto& qc = quot_counts[p];
    std::uint64_t pk = 1;
    for (unsigned k = 0; k <= max_e; ++k) {
      std::uint64_t in_sub = 0, lands = 0;
      for (auto u : elems)
        if (x.scale(u, pk) == 0) ++in_sub;
      for (std::uint64_t e = 0; e < x.size(); ++e)
        if (in_u.has(x.scale(e, pk))) ++lands;
      sc.push_back(in_sub);
      qc.push_back(lands / elems.size());
      pk *= p;
    }
  }
  return {type_from_torsion_counts(sub_counts), type_from_torsion_counts(quot_counts)};
}

}  // namespace detail

/// One (sub, quotient) type pair per subgroup of X. Subgroups are reached by
/// adjoining one element at a time starting from {0}, deduplicated by
/// element set; every subgroup is generated by at most (number of cyclic
/// factors) elements, so the search is exhaustive.
inline std::vector<SubgroupType> enumerate_subgroups(const FGModule& x, std::uint64_t cap) {
  if (x.rank() != 0) throw std::domain_error("enumerate_subgroups needs a finite module");
  if (x.order() > cap)
    throw std::domain_error("group order " + x.order().str() + " exceeds cap " + std::to_string(cap));
  FiniteGroupTable table(x);
  const std::uint64_t n = table.size();

  std::set<detail::ElementSet> seen;
  std::deque<std::vector<std::uint64_t>> queue;
  std::vector<SubgroupType> out;

  auto visit = [&](std::vector<std::uint64_t> elems) {
    detail::ElementSet s(n);
    for (auto e : elems) s.add(e);
    if (!seen.insert(s).second) return;
    out.push_back(detail::classify_subgroup(table, elems, s));
    queue.push_back(std::move(elems));
  };
  visit({0});
  while (!queue.empty()) {
    std::vector<std::uint64_t> u = std::move(queue.front());
    queue.pop_front();
    detail::ElementSet in_u(n);
    for (auto e : u) in_u.add(e);
    // Adjoin one generator per coset of U; equal cosets give equal groups.
    detail::ElementSet covered = in_u;
    for (std::uint64_t x0 = 0; x0 < n; ++x0) {
      if (covered.has(x0)) continue;
      for (auto e : u) covered.add(table.add(e, x0));
      std::vector<std::uint64_t> v = u;
      for (std::uint64_t s = x0; !in_u.has(s); s = table.add(s, x0))
        for (auto e : u) v.push_back(table.add(e, s));
      std::sort(v.begin(), v.end());
      visit(std::move(v));
    }
  }
  return out;
}

/// Sorted distinct (sub, quotient) pairs realized by subgroups of X.
inline std::vector<SubgroupType> subgroup_type_pairs(const FGModule& x, std::uint64_t cap) {
  auto all = enumerate_subgroups(x, cap);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

/// Whether some subgroup of B has type A with quotient of type C.
inline bool ses_exists(const FGModule& a, const FGModule& b, const FGModule& c, std::uint64_t cap) {
  if (a.rank() || b.rank() || c.rank())
    throw std::domain_error("ses_exists is defined on finite modules only");
  if (b.order() > cap) throw std::domain_error("|B| exceeds the enumeration cap");
  if (a.order() * c.order() != b.order()) return false;
  for (const auto& t : enumerate_subgroups(b, cap))
    if (t.sub == a && t.quotient == c) return true;
  return false;
}

struct Triple {
  FGModule a, b, c;
  friend bool operator==(const Triple&, const Triple&) = default;
};

/// Every (A, B, C) of finite modules in the universe with |B| <= max_order
/// and an exact sequence 0 -> A -> B -> C -> 0, grouped by B.
inline std::vector<Triple> finite_ses_triples(const UniverseBounds& bounds) {
  std::vector<Triple> out;
  for (const auto& b : enumerate_modules(bounds)) {
    if (b.rank() != 0 || b.order() > bounds.max_order) continue;
    for (const auto& t : subgroup_type_pairs(b, bounds.max_order)) out.push_back({t.sub, b, t.quotient});
  }
  return out;
}

/// First finite s.e.s. triple where two terms satisfy the predicate and the
/// third does not; nullopt when the predicate is 2-3 closed on the universe.
inline std::optional<Triple> check_two_three_closed(const std::function<bool(const FGModule&)>& pred,
                                                    const UniverseBounds& bounds) {
  for (const auto& t : finite_ses_triples(bounds)) {
    int in = int(pred(t.a)) + int(pred(t.b)) + int(pred(t.c));
    if (in == 2) return t;
  }
  return std::nullopt;
}

/// Least fixpoint of the two-out-of-three rule on a finite working universe.
///
/// Certified exact sequences come from three sources, all sound:
///  - finite triples, decided one prime at a time (a sequence of finite
///    groups is exact iff each p-primary part is): exhaustive subgroup
///    enumeration when |B_p| <= max_order, otherwise split sequences and the
///    verified step families;
///  - split sequences involving free summands;
///  - the multiplication and torsion-strip families for positive rank.
class FixpointEngine {
 public:
  explicit FixpointEngine(UniverseBounds working) : bounds_(std::move(working)) {
    parts_ = partitions_up_to(bounds_.max_length_per_prime);
    for (std::size_t i = 0; i < parts_.size(); ++i) part_index_.emplace(parts_[i], i);
    torsion_count_ = 1;
    for (std::size_t i = 0; i < bounds_.primes.size(); ++i) torsion_count_ *= parts_.size();
    module_count_ = torsion_count_ * (bounds_.max_rank + 1);
    build_triples();
  }

  /// Working universe with doubled per-prime length: the constructive
  /// sequences for a module of length l pass through middles of length 2l.
  static UniverseBounds widened(const UniverseBounds& b) {
    UniverseBounds w = b;
    w.max_length_per_prime = 2 * b.max_length_per_prime;
    return w;
  }

  const UniverseBounds& bounds() const { return bounds_; }
  std::size_t module_count() const { return module_count_; }
  std::size_t triple_count() const { return triples_.size(); }

  std::size_t id(const FGModule& m) const {
    if (!bounds_.contains(m)) throw std::out_of_range(to_string(m) + " is outside the working universe");
    std::size_t key = 0;
    for (std::size_t i = bounds_.primes.size(); i-- > 0;)
      key = key * parts_.size() + part_index_.at(m.partition(bounds_.primes[i]));
    return static_cast<std::size_t>(m.rank()) * torsion_count_ + key;
  }

  FGModule module(std::size_t id) const {
    std::uint64_t rank = id / torsion_count_;
    std::size_t key = id % torsion_count_;
    std::map<Prime, Partition> t;
    for (Prime p : bounds_.primes) {
      t.emplace(p, parts_[key % parts_.size()]);
      key /= parts_.size();
    }
    return {rank, std::move(t)};
  }

  /// Membership flags over the working universe.
  std::vector<char> run(const std::vector<FGModule>& generators) const {
    std::vector<char> in(module_count_, 0);
    std::vector<std::uint32_t> work;
    auto add = [&](std::uint32_t m) {
      if (!in[m]) {
        in[m] = 1;
        work.push_back(m);
      }
    };
    for (const auto& g : generators) add(static_cast<std::uint32_t>(id(g)));
    while (!work.empty()) {
      std::uint32_t m = work.back();
      work.pop_back();
      for (std::uint32_t t : adjacency_[m]) {
        const auto& tr = triples_[t];
        const int count = in[tr[0]] + in[tr[1]] + in[tr[2]];
        if (count != 2) continue;
        for (auto x : tr) add(x);
      }
    }
    return in;
  }

  /// Fixpoint members lying inside `report` (which must sit inside the working universe).
  std::set<FGModule> closure_within(const std::vector<FGModule>& generators,
                                    const UniverseBounds& report) const {
    std::vector<char> in = run(generators);
    std::set<FGModule> out;
    for (const auto& m : enumerate_modules(report))
      if (in[id(m)]) out.insert(m);
    return out;
  }

 private:
  using PartTriple = std::array<std::size_t, 3>;

  FGModule p_module(Prime p, std::size_t part) const { return {0, {{p, parts_[part]}}}; }

  std::set<PartTriple> prime_triples(Prime p) const {
    const unsigned w = bounds_.max_length_per_prime;
    std::set<PartTriple> out;
    for (std::size_t a = 0; a < parts_.size(); ++a)
      for (std::size_t c = 0; c < parts_.size(); ++c)
        if (parts_[a].total() + parts_[c].total() <= w)
          out.insert({a, part_index_.at(parts_[a] + parts_[c]), c});
    for (std::size_t b = 0; b < parts_.size(); ++b) {
      FGModule mb = p_module(p, b);
      if (mb.order() > bounds_.max_order) continue;
      for (const auto& t : subgroup_type_pairs(mb, bounds_.max_order))
        out.insert({part_index_.at(t.sub.partition(p)), b, part_index_.at(t.quotient.partition(p))});
    }
    auto take = [&](const SES& s) {
      if (!verify_ses(s).verified()) throw std::logic_error("constructive family failed to verify");
      FGModule a = s.sub(), b = s.middle(), c = s.quotient();
      if (b.partition(p).total() > w) return;
      out.insert({part_index_.at(a.partition(p)), part_index_.at(b.partition(p)),
                  part_index_.at(c.partition(p))});
    };
    for (std::size_t gi = 0; gi < parts_.size(); ++gi) {
      const FGModule g = p_module(p, gi);
      const std::uint64_t gl = parts_[gi].total();
      for (unsigned r = 2; 2 * (r + gl) <= w; ++r) {
        auto [s1, s2] = family_step1(p, r, g);
        take(s1);
        take(s2);
      }
      for (unsigned r = 1; 2 * (r + 1 + gl) <= w; ++r) {
        auto [s1, s2] = family_step2(p, r, g);
        take(s1);
        take(s2);
      }
    }
    return out;
  }

  void add_triple(std::size_t a, std::size_t b, std::size_t c) {
    const auto t = static_cast<std::uint32_t>(triples_.size());
    triples_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                        static_cast<std::uint32_t>(c)});
    adjacency_[a].push_back(t);
    if (b != a) adjacency_[b].push_back(t);
    if (c != a && c != b) adjacency_[c].push_back(t);
  }

  void build_triples() {
    adjacency_.assign(module_count_, {});
    const std::size_t k = bounds_.primes.size();
    const std::size_t np = parts_.size();
    std::vector<std::vector<PartTriple>> per_prime;
    for (Prime p : bounds_.primes) {
      auto s = prime_triples(p);
      per_prime.emplace_back(s.begin(), s.end());
    }

    // Finite triples: product over primes.
    std::vector<std::size_t> digit(k, 0);
    for (bool more = true; more;) {
      std::size_t a = 0, b = 0, c = 0;
      for (std::size_t i = k; i-- > 0;) {
        const PartTriple& t = per_prime[i][digit[i]];
        a = a * np + t[0];
        b = b * np + t[1];
        c = c * np + t[2];
      }
      add_triple(a, b, c);
      std::size_t i = 0;
      while (i < k && ++digit[i] == per_prime[i].size()) digit[i++] = 0;
      more = i < k;
    }

    // Split pairs of torsion parts whose sum stays in bounds.
    std::vector<std::pair<std::size_t, std::size_t>> torsion_pairs;
    for (std::size_t ta = 0; ta < torsion_count_; ++ta)
      for (std::size_t tc = 0; tc < torsion_count_; ++tc) {
        bool fits = true;
        std::size_t x = ta, y = tc;
        for (std::size_t i = 0; i < k && fits; ++i, x /= np, y /= np)
          fits = parts_[x % np].total() + parts_[y % np].total() <= bounds_.max_length_per_prime;
        if (fits) torsion_pairs.emplace_back(ta, tc);
      }
    const std::uint64_t rmax = bounds_.max_rank;
    for (std::uint64_t ra = 0; ra <= rmax; ++ra)
      for (std::uint64_t rc = 0; ra + rc <= rmax; ++rc) {
        if (ra + rc == 0) continue;
        for (auto [ta, tc] : torsion_pairs) {
          FGModule a = module(ra * torsion_count_ + ta), c = module(rc * torsion_count_ + tc);
          add_triple(id(a), id(direct_sum(a, c)), id(c));
        }
      }

    // Positive-rank families.
    for (std::size_t m = torsion_count_; m < module_count_; ++m) {
      const FGModule mm = module(m);
      for (Prime p : bounds_.primes)
        for (unsigned t = 1; t <= bounds_.max_length_per_prime; ++t)
          add_triple(m, m, id(FGModule::cyclic(p, t)));
      add_triple(id(mm.torsion_part()), m, id(mm.free_part()));
    }
  }

  UniverseBounds bounds_;
  std::vector<Partition> parts_;
  std::map<Partition, std::size_t> part_index_;
  std::size_t torsion_count_ = 1;
  std::size_t module_count_ = 0;
  std::vector<std::array<std::uint32_t, 3>> triples_;
  std::vector<std::vector<std::uint32_t>> adjacency_;
};

/// Rule-based closure of `generators` restricted to the universe `b`.
inline std::set<FGModule> closure_fixpoint(const std::vector<FGModule>& generators,
                                           const UniverseBounds& b) {
  if (generators.empty()) return {};
  FixpointEngine engine(FixpointEngine::widened(b));
  return engine.closure_within(generators, b);
}

struct SandwichReport {
  SubcatDescriptor descriptor;
  std::set<FGModule> fixpoint;
  std::set<FGModule> predicate;
  std::vector<FGModule> witnesses;  // symmetric difference
  std::size_t universe_size = 0;

  bool pass() const { return witnesses.empty(); }
};

/// Compares the descriptor predicate with the rule-based fixpoint on `b`.
inline SandwichReport sandwich_check(const std::vector<FGModule>& generators, const UniverseBounds& b,
                                     const FixpointEngine& engine) {
  SandwichReport r;
  r.descriptor = closure(generators);
  const auto universe = enumerate_modules(b);
  r.universe_size = universe.size();
  if (!generators.empty()) r.fixpoint = engine.closure_within(generators, b);
  for (const auto& m : universe)
    if (member(r.descriptor, m)) r.predicate.insert(m);
  std::set_symmetric_difference(r.fixpoint.begin(), r.fixpoint.end(), r.predicate.begin(),
                                r.predicate.end(), std::back_inserter(r.witnesses));
  return r;
}

inline SandwichReport sandwich_check(const std::vector<FGModule>& generators, const UniverseBounds& b) {
  FixpointEngine engine(FixpointEngine::widened(b));
  return sandwich_check(generators, b, engine);
}

struct NotWideDemo {
  PresentedMorphism morphism;
  FGModule source;
  FGModule target;
  FGModule kernel;
};

/// Z^k -> Z^k keeping one coordinate: source and target lie in I_k, the
/// kernel Z^{k-1} does not, so I_k is not closed under kernels.
inline NotWideDemo demonstrate_not_wide(std::uint64_t k) {
  if (k < 2) throw std::domain_error("demonstrate_not_wide needs k >= 2");
  Presentation free_k = to_presentation(FGModule::free(k));
  IntMatrix proj(k, k);
  proj(0, 0) = 1;
  NotWideDemo demo{{free_k, free_k, proj}, FGModule::free(k), FGModule::free(k), {}};
  demo.kernel = kernel(demo.morphism);
  const SubcatDescriptor ik = IMod{k};
  if (!member(ik, demo.source) || !member(ik, demo.target) || member(ik, demo.kernel))
    throw std::logic_error("projection failed to leave I_k");
  return demo;
}

}  // namespace twothree
