#pragma once

#include "twothree/fg_module.hpp"
#include "twothree/integer.hpp"
#include "twothree/lattice.hpp"
#include "twothree/prime.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace twothree {

/// How a torsion family treats primes outside its support.
enum class Outside { Forbidden, Free };

/// The empty subcategory.
struct EmptySubcat {
  friend bool operator==(const EmptySubcat&, const EmptySubcat&) = default;
};

/// I_k = {X : k divides rank X}, k >= 1.
struct IMod {
  std::uint64_t k = 1;
  friend bool operator==(const IMod&, const IMod&) = default;
};

/// F(S, H): torsion modules whose length vector restricted to S lies in H.
/// Forbidden: no torsion off S. Free: torsion off S unconstrained.
struct TorsionF {
  Lattice lattice;
  Outside outside = Outside::Forbidden;

  const std::vector<Prime>& support() const { return lattice.support(); }
};

using SubcatDescriptor = std::variant<EmptySubcat, IMod, TorsionF>;

inline SubcatDescriptor make_imod(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("I_0 is TorsionF(empty, trivial, Free), not IMod(0)");
  return IMod{k};
}

inline SubcatDescriptor make_torsion_f(Lattice h, Outside outside) {
  return TorsionF{std::move(h), outside};
}

/// The zero subcategory {0}.
inline SubcatDescriptor zero_subcat() {
  return TorsionF{Lattice::zero({}), Outside::Forbidden};
}

/// I_0: every torsion module.
inline SubcatDescriptor all_torsion() { return TorsionF{Lattice::full({}), Outside::Free}; }

/// Length vector of a torsion module restricted to `support`.
inline std::vector<Integer> restricted_lengths(const FGModule& x, const std::vector<Prime>& support) {
  std::vector<Integer> v;
  v.reserve(support.size());
  for (Prime p : support) v.emplace_back(x.partition(p).total());
  return v;
}

inline bool member(const SubcatDescriptor& d, const FGModule& x) {
  return std::visit(
      [&](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EmptySubcat>) {
          return false;
        } else if constexpr (std::is_same_v<T, IMod>) {
          return x.rank() % v.k == 0;
        } else {
          if (x.rank() != 0) return false;
          if (v.outside == Outside::Forbidden)
            for (const auto& [p, part] : x.torsion())
              if (!std::binary_search(v.support().begin(), v.support().end(), p)) return false;
          return v.lattice.contains(restricted_lengths(x, v.support()));
        }
      },
      d);
}

/// Drop support primes whose constraint is vacuous under the policy: under
/// Free, p goes when e_p lies in H; under Forbidden, when H forces x_p = 0.
inline SubcatDescriptor canonicalize(const SubcatDescriptor& d) {
  const auto* t = std::get_if<TorsionF>(&d);
  if (!t) return d;
  Lattice h = t->lattice;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t j = 0; j < h.dimension(); ++j) {
      bool drop = false;
      if (t->outside == Outside::Free) {
        std::vector<Integer> e(h.dimension());
        e[j] = 1;
        drop = h.contains(e);
      } else {
        drop = true;
        for (std::size_t i = 0; i < h.canonical().rows(); ++i)
          if (h.canonical()(i, j) != 0) drop = false;
      }
      if (drop) {
        h = h.drop_coordinate(h.support()[j]);
        changed = true;
        break;
      }
    }
  }
  return TorsionF{std::move(h), t->outside};
}

inline std::vector<Prime> union_support(const std::vector<Prime>& a, const std::vector<Prime>& b) {
  std::vector<Prime> u;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
  return u;
}

/// Re-express a torsion family over a larger support without changing members.
inline Lattice aligned_lattice(const TorsionF& t, const std::vector<Prime>& support) {
  return t.lattice.extend_to(support, t.outside == Outside::Free);
}

/// Closure of a finite generator set: the smallest 2-3 subcategory containing it.
inline SubcatDescriptor closure(const std::vector<FGModule>& generators) {
  if (generators.empty()) return EmptySubcat{};
  Integer k = 0;
  for (const auto& g : generators)
    if (g.rank() > 0) k = gcd(k, Integer(g.rank()));
  if (k != 0) return IMod{to_u64(k)};

  std::set<Prime> primes;
  for (const auto& g : generators)
    for (const auto& [p, part] : g.torsion()) primes.insert(p);
  std::vector<Prime> support(primes.begin(), primes.end());
  std::vector<std::vector<Integer>> vectors;
  for (const auto& g : generators)
    if (!g.is_zero()) vectors.push_back(restricted_lengths(g, support));
  return canonicalize(TorsionF{Lattice::from_generators(support, vectors), Outside::Forbidden});
}

/// Member-set inclusion: every member of `inner` is a member of `outer`.
inline bool includes(const SubcatDescriptor& outer_in, const SubcatDescriptor& inner_in) {
  SubcatDescriptor outer = canonicalize(outer_in), inner = canonicalize(inner_in);
  if (std::holds_alternative<EmptySubcat>(inner)) return true;
  if (std::holds_alternative<EmptySubcat>(outer)) return false;
  if (const auto* o = std::get_if<IMod>(&outer)) {
    if (const auto* i = std::get_if<IMod>(&inner)) return i->k % o->k == 0;
    return true;
  }
  const auto& o = std::get<TorsionF>(outer);
  const auto* i = std::get_if<TorsionF>(&inner);
  if (!i) return false;
  if (o.outside == Outside::Forbidden && i->outside == Outside::Free) return false;
  auto u = union_support(o.support(), i->support());
  if (o.outside == Outside::Forbidden)
    for (Prime p : i->support())
      if (!std::binary_search(o.support().begin(), o.support().end(), p)) return false;
  return aligned_lattice(o, u).includes(aligned_lattice(*i, u));
}

/// Member-set equality.
inline bool descriptor_equal(const SubcatDescriptor& a_in, const SubcatDescriptor& b_in) {
  SubcatDescriptor a = canonicalize(a_in), b = canonicalize(b_in);
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<EmptySubcat>(a)) return true;
  if (const auto* ia = std::get_if<IMod>(&a)) return ia->k == std::get<IMod>(b).k;
  const auto& ta = std::get<TorsionF>(a);
  const auto& tb = std::get<TorsionF>(b);
  if (ta.outside != tb.outside) return false;
  auto u = union_support(ta.support(), tb.support());
  return aligned_lattice(ta, u) == aligned_lattice(tb, u);
}

/// The 2-3 subcategory of W_S matching a subgroup H of K0(W_S) = Z^S.
inline SubcatDescriptor subgroup_to_subcat(const std::vector<Prime>& s, const Lattice& h) {
  if (h.support() != s) throw std::invalid_argument("lattice support must equal S");
  return canonicalize(TorsionF{h, Outside::Forbidden});
}

/// Inverse of subgroup_to_subcat: the subgroup of Z^S cut out by the members.
inline Lattice subcat_to_subgroup(const SubcatDescriptor& d_in, const std::vector<Prime>& s) {
  SubcatDescriptor d = canonicalize(d_in);
  const auto* t = std::get_if<TorsionF>(&d);
  if (!t) throw std::domain_error("only torsion families correspond to subgroups of K0(W_S)");
  if (t->outside != Outside::Forbidden)
    throw std::domain_error("a Free-policy family is not a subcategory of W_S");
  for (Prime p : t->support())
    if (!std::binary_search(s.begin(), s.end(), p))
      throw std::domain_error("descriptor support is not contained in S");
  return t->lattice.extend_to(s, false);
}

/// Generator of the image of a descriptor in K0 of the whole category (rank
/// classes, a subgroup of Z). Empty has no members and is reported as 0.
inline Integer rank_class_generator(const SubcatDescriptor& d) {
  if (const auto* i = std::get_if<IMod>(&d)) return Integer(i->k);
  return 0;
}

/// Two distinct 2-3 subcategories with the same rank-class image: the
/// K0 correspondence breaks down on the whole category.
inline std::pair<SubcatDescriptor, SubcatDescriptor> k0_failure_witness() {
  const Prime two = Prime::of(2), three = Prime::of(3);
  return {TorsionF{Lattice::full({two}), Outside::Forbidden},
          TorsionF{Lattice::full({three}), Outside::Forbidden}};
}

namespace detail {

inline std::string lattice_label(const Lattice& h) {
  if (h.rank() == 0) return "0";
  if (h.dimension() == 1) {
    Integer g = h.canonical()(0, 0);
    return g == 1 ? "Z" : g.str() + "Z";
  }
  if (h.rank() == h.dimension()) {
    bool identity = true;
    for (std::size_t i = 0; i < h.rank(); ++i)
      for (std::size_t j = 0; j < h.dimension(); ++j)
        if (h.canonical()(i, j) != (i == j ? 1 : 0)) identity = false;
    if (identity) return "Z^" + std::to_string(h.dimension());
  }
  std::string out = "<";
  for (std::size_t i = 0; i < h.rank(); ++i) {
    out += i ? ",(" : "(";
    for (std::size_t j = 0; j < h.dimension(); ++j) out += (j ? "," : "") + h.canonical()(i, j).str();
    out += ")";
  }
  return out + ">";
}

}  // namespace detail

/// One-line classification, e.g. "I_2" or "F({2,3}, <(2,1)>)".
inline std::string classify(const SubcatDescriptor& d) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, EmptySubcat>) {
          return "empty";
        } else if constexpr (std::is_same_v<T, IMod>) {
          return "I_" + std::to_string(v.k);
        } else {
          std::string s = "F({";
          for (std::size_t i = 0; i < v.support().size(); ++i)
            s += (i ? "," : "") + v.support()[i].str();
          s += "}, " + detail::lattice_label(v.lattice);
          if (v.outside == Outside::Free) s += "; outside free";
          return s + ")";
        }
      },
      d);
}

}  // namespace twothree
