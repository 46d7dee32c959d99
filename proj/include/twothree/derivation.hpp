#pragma once

#include "twothree/fg_module.hpp"
#include "twothree/lattice.hpp"
#include "twothree/normal_form.hpp"
#include "twothree/ses.hpp"
#include "twothree/subcat.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace twothree {

enum class Rule { Axiom, SumSplit, SubInfer, QuotientInfer, MiddleInfer };
enum class Position { Sub, Middle, Quotient };

inline const char* to_string(Rule r) {
  switch (r) {
    case Rule::Axiom: return "Axiom";
    case Rule::SumSplit: return "SumSplit";
    case Rule::SubInfer: return "SubInfer";
    case Rule::QuotientInfer: return "QuotientInfer";
    case Rule::MiddleInfer: return "MiddleInfer";
  }
  return "?";
}
inline const char* to_string(Position p) {
  switch (p) {
    case Position::Sub: return "sub";
    case Position::Middle: return "middle";
    case Position::Quotient: return "quotient";
  }
  return "?";
}

/// Where a rule puts its conclusion; Axiom has none.
inline std::optional<Position> conclusion_position(Rule r) {
  switch (r) {
    case Rule::Axiom: return std::nullopt;
    case Rule::SubInfer: return Position::Sub;
    case Rule::QuotientInfer: return Position::Quotient;
    case Rule::SumSplit:
    case Rule::MiddleInfer: return Position::Middle;
  }
  return std::nullopt;
}

struct Premise {
  std::size_t index = 0;  // an earlier step
  Position position = Position::Sub;

  friend bool operator==(const Premise&, const Premise&) = default;
};

struct DerivationStep {
  Rule rule = Rule::Axiom;
  std::vector<Premise> premises;
  std::optional<SES> ses;
  FGModule conclusion;
};

/// A chain of two-out-of-three inferences from `generators` to `target`.
/// Generators enter through Axiom steps; each later step names two earlier
/// steps as premises.
struct Derivation {
  std::vector<FGModule> generators;
  std::vector<DerivationStep> steps;
  FGModule target;
};

struct DerivationVerdict {
  bool verified = true;
  std::size_t failed_step = 0;  // meaningful only when !verified
  std::string reason;
};

namespace detail {

inline const FGModule& at_position(const FGModule& a, const FGModule& b, const FGModule& c,
                                   Position p) {
  return p == Position::Sub ? a : p == Position::Middle ? b : c;
}

}  // namespace detail

inline DerivationVerdict verify_derivation(const Derivation& d) {
  auto fail = [](std::size_t i, std::string why) {
    return DerivationVerdict{false, i, std::move(why)};
  };
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    const DerivationStep& s = d.steps[i];
    if (s.rule == Rule::Axiom) {
      if (!s.premises.empty() || s.ses) return fail(i, "axiom steps take no premises");
      if (std::find(d.generators.begin(), d.generators.end(), s.conclusion) == d.generators.end())
        return fail(i, "axiom conclusion " + to_string(s.conclusion) + " is not a generator");
      continue;
    }
    if (!s.ses) return fail(i, "inference step without a short exact sequence");
    if (s.premises.size() != 2) return fail(i, "inference steps take exactly two premises");
    const Position concl = *conclusion_position(s.rule);
    const Premise &p0 = s.premises[0], &p1 = s.premises[1];
    if (p0.position == p1.position || p0.position == concl || p1.position == concl)
      return fail(i, "premise positions must be the two positions other than the conclusion's");
    if (p0.index >= i || p1.index >= i) return fail(i, "premise refers to a later step");

    SESVerdict v;
    try {
      v = verify_ses(*s.ses);
    } catch (const IllDefinedMorphism& e) {
      return fail(i, std::string("ill-defined morphism: ") + e.what());
    }
    if (!v.verified()) return fail(i, std::string(to_string(v.failure)) + " (" + v.detail + ")");

    const FGModule a = s.ses->sub(), b = s.ses->middle(), c = s.ses->quotient();
    for (const Premise& p : s.premises) {
      const FGModule& have = d.steps[p.index].conclusion;
      const FGModule& need = detail::at_position(a, b, c, p.position);
      if (have != need)
        return fail(i, std::string("premise at ") + to_string(p.position) + " is " +
                           to_string(have) + " but the sequence has " + to_string(need));
    }
    if (detail::at_position(a, b, c, concl) != s.conclusion)
      return fail(i, "stated conclusion " + to_string(s.conclusion) + " does not match the sequence");
    if (s.rule == Rule::SumSplit && b != direct_sum(a, c))
      return fail(i, "SumSplit middle is not the direct sum of its ends");
  }
  if (d.steps.empty()) return fail(0, "derivation has no steps");
  if (d.steps.back().conclusion != d.target)
    return fail(d.steps.size() - 1, "final conclusion differs from the target");
  return {};
}

/// Which defining invariant puts a module outside a closure.
enum class Violation { EmptyClosure, RankClass, Support, LatticeMembership };

inline const char* to_string(Violation v) {
  switch (v) {
    case Violation::EmptyClosure: return "empty closure";
    case Violation::RankClass: return "rank class";
    case Violation::Support: return "support";
    case Violation::LatticeMembership: return "lattice membership";
  }
  return "?";
}

class NotInClosure : public std::domain_error {
 public:
  NotInClosure(Violation v, const std::string& what) : std::domain_error(what), violation_(v) {}
  Violation violation() const { return violation_; }

 private:
  Violation violation_;
};

/// The invariant that excludes `x` from the descriptor, or nullopt if x is a member.
inline std::optional<Violation> violated_invariant(const SubcatDescriptor& d, const FGModule& x) {
  if (member(d, x)) return std::nullopt;
  if (std::holds_alternative<EmptySubcat>(d)) return Violation::EmptyClosure;
  if (std::holds_alternative<IMod>(d)) return Violation::RankClass;
  const auto& t = std::get<TorsionF>(d);
  if (x.rank() != 0) return Violation::RankClass;
  if (t.outside == Outside::Forbidden)
    for (const auto& [p, part] : x.torsion())
      if (!std::binary_search(t.support().begin(), t.support().end(), p)) return Violation::Support;
  return Violation::LatticeMembership;
}

namespace detail {

/// Accumulates steps and remembers which modules are already available.
class DerivationBuilder {
 public:
  explicit DerivationBuilder(std::vector<FGModule> generators) {
    d_.generators = std::move(generators);
  }

  std::optional<std::size_t> find(const FGModule& m) const {
    auto it = known_.find(m);
    if (it == known_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t axiom(const FGModule& g) {
    if (auto i = find(g)) return *i;
    return record({Rule::Axiom, {}, std::nullopt, g});
  }

  /// Applies `rule` to `ses` with the two premises at the non-conclusion positions.
  std::size_t infer(Rule rule, SES ses, Premise a, Premise b) {
    const Position concl = *conclusion_position(rule);
    FGModule x = ses.sub(), y = ses.middle(), z = ses.quotient();
    FGModule c = at_position(x, y, z, concl);
    if (auto i = find(c)) return *i;
    return record({rule, {a, b}, std::move(ses), std::move(c)});
  }

  /// X + Y from X and Y.
  std::size_t sum(std::size_t x, std::size_t y) {
    const FGModule& mx = module(x);
    const FGModule& my = module(y);
    if (auto i = find(direct_sum(mx, my))) return *i;
    return infer(Rule::SumSplit, family_split(mx, my), {x, Position::Sub}, {y, Position::Quotient});
  }

  /// The zero module from any available X (0 -> X -> X -> 0 -> 0).
  std::size_t zero_from(std::size_t x) {
    if (auto i = find(FGModule::zero())) return *i;
    return infer(Rule::QuotientInfer, family_split(module(x), FGModule::zero()),
                 {x, Position::Sub}, {x, Position::Middle});
  }

  const FGModule& module(std::size_t i) const { return d_.steps.at(i).conclusion; }

  Derivation finish(const FGModule& target, std::size_t last) {
    if (module(last) != target) throw std::logic_error("derivation engine missed its target");
    if (last + 1 != d_.steps.size()) {
      // Target was already available; restate it as the final step.
      DerivationStep again = d_.steps[last];
      d_.steps.push_back(std::move(again));
    }
    d_.target = target;
    return std::move(d_);
  }

 private:
  std::size_t record(DerivationStep s) {
    const std::size_t i = d_.steps.size();
    known_.emplace(s.conclusion, i);
    d_.steps.push_back(std::move(s));
    return i;
  }

  Derivation d_;
  std::map<FGModule, std::size_t> known_;
};

/// Case (i): some generator has positive rank.
class RankCase {
 public:
  RankCase(DerivationBuilder& b, const std::vector<FGModule>& gens) : b_(b) {
    for (const auto& g : gens)
      if (g.rank() > 0) ranked_.push_back(g);
    anchor_ = b_.axiom(ranked_.front());
  }

  std::size_t cyclic(Prime p, unsigned t) {
    const FGModule target = FGModule::cyclic(p, t);
    if (auto i = b_.find(target)) return *i;
    return b_.infer(Rule::QuotientInfer, family_mult_cyclic(b_.module(anchor_), p, t),
                    {anchor_, Position::Sub}, {anchor_, Position::Middle});
  }

  /// Any torsion module, as a sum of cyclic summands.
  std::size_t torsion(const FGModule& t) {
    if (auto i = b_.find(t)) return *i;
    if (t.is_zero()) return b_.zero_from(anchor_);
    std::optional<std::size_t> acc;
    for (const auto& [p, part] : t.torsion())
      for (unsigned r : part.parts()) {
        std::size_t c = cyclic(p, r);
        acc = acc ? b_.sum(*acc, c) : c;
      }
    return *acc;
  }

  /// Z^rank(g) from the generator g via its torsion part.
  std::size_t free_part_of(const FGModule& g) {
    std::size_t gi = b_.axiom(g);
    if (g.torsion().empty()) return gi;
    if (auto i = b_.find(g.free_part())) return *i;
    std::size_t ti = torsion(g.torsion_part());
    return b_.infer(Rule::QuotientInfer, family_torsion_strip(g), {ti, Position::Sub},
                    {gi, Position::Middle});
  }

  /// Z^a - Z^b by the split sequence 0 -> Z^b -> Z^a -> Z^{a-b} -> 0.
  std::size_t difference(std::size_t za, std::size_t zb) {
    const std::uint64_t a = b_.module(za).rank(), bb = b_.module(zb).rank();
    return b_.infer(Rule::QuotientInfer, family_split(FGModule::free(bb), FGModule::free(a - bb)),
                    {zb, Position::Sub}, {za, Position::Middle});
  }

  /// Subtractive Euclid down to Z^gcd.
  std::size_t gcd_free() {
    std::size_t acc = free_part_of(ranked_.front());
    for (std::size_t j = 1; j < ranked_.size(); ++j) {
      std::size_t other = free_part_of(ranked_[j]);
      while (b_.module(acc).rank() != b_.module(other).rank()) {
        if (b_.module(acc).rank() > b_.module(other).rank()) acc = difference(acc, other);
        else other = difference(other, acc);
      }
    }
    return acc;
  }

  std::size_t build(const FGModule& target) {
    if (auto i = b_.find(target)) return *i;
    const FGModule t = target.torsion_part();
    if (target.rank() == 0) return torsion(t);
    std::size_t zk = gcd_free();
    const std::uint64_t k = b_.module(zk).rank();
    std::size_t acc = zk;
    for (std::uint64_t have = k; have < target.rank(); have += k) acc = b_.sum(acc, zk);
    if (t.is_zero()) return acc;
    return b_.sum(acc, torsion(t));
  }

 private:
  DerivationBuilder& b_;
  std::vector<FGModule> ranked_;
  std::size_t anchor_ = 0;
};

/// Case (ii): torsion generators.
class TorsionCase {
 public:
  TorsionCase(DerivationBuilder& b, const std::vector<FGModule>& gens, std::vector<Prime> support)
      : b_(b), support_(std::move(support)) {
    for (const auto& g : gens)
      if (!g.is_zero()) gens_.push_back(g);
  }

  std::size_t build(const FGModule& target) {
    if (auto i = b_.find(target)) return *i;
    if (gens_.empty()) throw std::logic_error("nonzero target from zero generators");
    if (target.is_zero()) return b_.zero_from(b_.axiom(gens_.front()));
    std::vector<std::int64_t> coeff = coefficients(target);

    LengthVector pos, neg;
    std::optional<std::size_t> pos_i, neg_i;
    for (std::size_t j = 0; j < gens_.size(); ++j) {
      if (coeff[j] == 0) continue;
      std::size_t e = elementary_of(j);
      auto& acc = coeff[j] > 0 ? pos_i : neg_i;
      for (std::int64_t c = std::llabs(coeff[j]); c > 0; --c) acc = acc ? b_.sum(*acc, e) : e;
    }
    std::size_t elem;
    if (!pos_i) {
      elem = b_.zero_from(b_.axiom(gens_.front()));
    } else if (!neg_i) {
      elem = *pos_i;
    } else {
      const FGModule n = b_.module(*neg_i);
      const FGModule want = FGModule::elementary(length_vector_of(target));
      elem = b_.infer(Rule::QuotientInfer, family_split(n, want), {*neg_i, Position::Sub},
                      {*pos_i, Position::Middle});
    }
    return shape(elem, target);
  }

 private:
  LengthVector length_vector_of(const FGModule& x) const { return length_vector(x); }

  /// Integer coefficients c with sum c_j lambda_j = lambda(target), reduced
  /// greedily along the kernel to keep the construction small.
  std::vector<std::int64_t> coefficients(const FGModule& target) const {
    const std::size_t n = support_.size(), g = gens_.size();
    IntMatrix lam(n, g);
    for (std::size_t j = 0; j < g; ++j)
      for (std::size_t i = 0; i < n; ++i) lam(i, j) = gens_[j].partition(support_[i]).total();
    std::vector<Integer> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = target.partition(support_[i]).total();
    auto sol = solve_integer(lam, rhs);
    if (!sol) throw std::logic_error("target length vector is not in the generated lattice");
    IntMatrix null = integer_nullspace(lam);

    std::vector<Integer> weight(g);
    for (std::size_t j = 0; j < g; ++j) {
      std::uint64_t len = 0;
      for (const auto& [p, part] : gens_[j].torsion()) len += part.total();
      weight[j] = len;
    }
    auto cost = [&](const std::vector<Integer>& c) {
      Integer s = 0;
      for (std::size_t j = 0; j < g; ++j) s += abs(c[j]) * weight[j];
      return s;
    };
    std::vector<Integer> c = *sol;
    for (bool improved = true; improved;) {
      improved = false;
      for (std::size_t k = 0; k < null.cols(); ++k)
        for (int sign : {1, -1}) {
          for (;;) {
            std::vector<Integer> trial = c;
            for (std::size_t j = 0; j < g; ++j) trial[j] += sign * null(j, k);
            if (cost(trial) < cost(c)) {
              c = std::move(trial);
              improved = true;
            } else {
              break;
            }
          }
        }
    }
    std::vector<std::int64_t> out(g);
    for (std::size_t j = 0; j < g; ++j) out[j] = c[j].convert_to<std::int64_t>();
    return out;
  }

  /// Descends generator j to the elementary module with the same lengths.
  std::size_t elementary_of(std::size_t j) {
    std::size_t cur = b_.axiom(gens_[j]);
    for (;;) {
      const FGModule m = b_.module(cur);
      std::optional<Prime> p;
      for (const auto& [q, part] : m.torsion())
        if (part.largest() >= 2) {
          p = q;
          break;
        }
      if (!p) return cur;
      std::vector<unsigned> parts = m.partition(*p).parts();
      const unsigned r = parts.front();
      parts.erase(parts.begin());
      const FGModule rest = parts.empty() ? FGModule::zero() : FGModule(0, {{*p, Partition(parts)}});
      auto [first, second] = family_step1(*p, r, rest);
      const FGModule other = m.without_prime(*p);
      std::size_t mid = b_.infer(Rule::MiddleInfer, pad(first, other), {cur, Position::Sub},
                                 {cur, Position::Quotient});
      cur = b_.infer(Rule::QuotientInfer, pad(second, other), {cur, Position::Sub},
                     {mid, Position::Middle});
    }
  }

  /// Grows parts of an elementary module into the target's partitions.
  std::size_t shape(std::size_t cur, const FGModule& target) {
    for (const auto& [p, want] : target.torsion()) {
      // `done` holds finished parts; the remaining exponent-1 parts feed the merges.
      std::vector<unsigned> done;
      std::uint64_t ones = want.total();
      for (unsigned r : want.parts()) {
        ones -= 1;
        unsigned grown = 1;
        while (grown < r) {
          ones -= 1;
          std::vector<unsigned> g_parts = done;
          g_parts.insert(g_parts.end(), ones, 1u);
          const FGModule g = g_parts.empty() ? FGModule::zero() : FGModule(0, {{p, Partition(g_parts)}});
          const FGModule other = b_.module(cur).without_prime(p);
          auto [first, second] = family_step2(p, grown, g);
          std::size_t mid = b_.infer(Rule::MiddleInfer, pad(first, other), {cur, Position::Sub},
                                     {cur, Position::Quotient});
          cur = b_.infer(Rule::QuotientInfer, pad(second, other), {cur, Position::Sub},
                         {mid, Position::Middle});
          ++grown;
        }
        done.push_back(r);
      }
    }
    return cur;
  }

  DerivationBuilder& b_;
  std::vector<Prime> support_;
  std::vector<FGModule> gens_;
};

}  // namespace detail

/// Builds a verified chain of 2-3 inferences from `generators` to `target`.
/// Throws NotInClosure naming the violated invariant otherwise.
inline Derivation derive_witness(const std::vector<FGModule>& generators, const FGModule& target) {
  const SubcatDescriptor d = closure(generators);
  if (auto v = violated_invariant(d, target))
    throw NotInClosure(*v, to_string(target) + " is not in " + classify(d) + " (" + to_string(*v) +
                               " violated)");

  detail::DerivationBuilder b(generators);
  if (std::find(generators.begin(), generators.end(), target) != generators.end())
    return b.finish(target, b.axiom(target));

  std::size_t last;
  if (std::holds_alternative<IMod>(d)) {
    detail::RankCase rc(b, generators);
    last = rc.build(target);
  } else {
    const auto& t = std::get<TorsionF>(d);
    bool any_nonzero = false;
    for (const auto& g : generators) any_nonzero |= !g.is_zero();
    if (!any_nonzero) {
      last = b.axiom(FGModule::zero());
    } else {
      detail::TorsionCase tc(b, generators, t.support());
      last = tc.build(target);
    }
  }
  return b.finish(target, last);
}

}  // namespace twothree
