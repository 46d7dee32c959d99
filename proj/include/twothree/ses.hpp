#pragma once

#include "twothree/fg_module.hpp"
#include "twothree/int_matrix.hpp"
#include "twothree/normal_form.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace twothree {

/// Thrown when a matrix does not induce a map of the presented modules.
class IllDefinedMorphism : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Homomorphism coker(source.relations) -> coker(target.relations) given by
/// an integer matrix (target generators x source generators).
struct PresentedMorphism {
  Presentation source;
  Presentation target;
  IntMatrix matrix;

  friend bool operator==(const PresentedMorphism&, const PresentedMorphism&) = default;
};

/// matrix * (source relations) lies in the column span of the target relations.
inline bool is_well_defined(const PresentedMorphism& m) {
  if (m.matrix.rows() != m.target.generators || m.matrix.cols() != m.source.generators)
    return false;
  IntMatrix images = m.matrix * m.source.relations;
  return solve_integer(m.target.relations, images).has_value();
}

inline void require_well_defined(const PresentedMorphism& m) {
  if (m.matrix.rows() != m.target.generators || m.matrix.cols() != m.source.generators)
    throw IllDefinedMorphism("morphism matrix shape does not match its presentations");
  if (!is_well_defined(m))
    throw IllDefinedMorphism("morphism does not respect the source relations");
}

/// Presentation of coker(m): target relations augmented by the image columns.
inline Presentation cokernel_presentation(const PresentedMorphism& m) {
  return {m.target.generators, hconcat(m.target.relations, m.matrix)};
}

inline FGModule cokernel(const PresentedMorphism& m) {
  require_well_defined(m);
  return from_presentation(cokernel_presentation(m));
}

/// Presentation of ker(m). The lifted kernel {a : m a in span(target rel)}
/// is a free lattice containing the source relations; re-express the latter
/// in a basis of the former.
inline Presentation kernel_presentation(const PresentedMorphism& m) {
  require_well_defined(m);
  const std::size_t n = m.source.generators;
  if (n == 0) return {};
  IntMatrix system = hconcat(m.matrix, -m.target.relations);
  IntMatrix null = integer_nullspace(system);
  IntMatrix lifted = null.row_block(0, n);
  HNFResult hnf = hermite_normal_form(lifted.transposed());
  IntMatrix basis = hnf.H.row_block(0, hnf.rank).transposed();
  auto coords = solve_integer(basis, m.source.relations);
  if (!coords) throw std::logic_error("source relations escape the lifted kernel");
  return {basis.cols(), std::move(*coords)};
}

inline FGModule kernel(const PresentedMorphism& m) {
  return from_presentation(kernel_presentation(m));
}

/// 0 -> A --f--> B --g--> C -> 0 on presented modules.
struct SES {
  Presentation a;
  Presentation b;
  Presentation c;
  IntMatrix f;  // b.generators x a.generators
  IntMatrix g;  // c.generators x b.generators

  PresentedMorphism f_map() const { return {a, b, f}; }
  PresentedMorphism g_map() const { return {b, c, g}; }

  FGModule sub() const { return from_presentation(a); }
  FGModule middle() const { return from_presentation(b); }
  FGModule quotient() const { return from_presentation(c); }

  friend bool operator==(const SES&, const SES&) = default;
};

enum class SESFailure { None, NotInjective, ImageNotKernel, NotSurjective };

inline const char* to_string(SESFailure f) {
  switch (f) {
    case SESFailure::None: return "verified";
    case SESFailure::NotInjective: return "f is not injective";
    case SESFailure::ImageNotKernel: return "image of f differs from kernel of g";
    case SESFailure::NotSurjective: return "g is not surjective";
  }
  return "unknown";
}

struct SESVerdict {
  SESFailure failure = SESFailure::None;
  std::string detail;

  bool verified() const { return failure == SESFailure::None; }
};

/// Checks f injective, g o f = 0, the induced coker(f) -> C injective and g
/// surjective. Throws IllDefinedMorphism when f or g is not a morphism.
inline SESVerdict verify_ses(const SES& s) {
  PresentedMorphism f = s.f_map(), g = s.g_map();
  require_well_defined(f);
  require_well_defined(g);

  FGModule ker_f = kernel(f);
  if (!ker_f.is_zero()) return {SESFailure::NotInjective, "ker f = " + to_string(ker_f)};

  FGModule coker_g = cokernel(g);
  PresentedMorphism induced{cokernel_presentation(f), s.c, s.g};
  if (!is_well_defined(induced))
    return {SESFailure::ImageNotKernel, "g o f is nonzero"};
  FGModule ker_induced = kernel(induced);
  if (!ker_induced.is_zero())
    return {SESFailure::ImageNotKernel, "ker g / im f = " + to_string(ker_induced)};
  if (!coker_g.is_zero()) return {SESFailure::NotSurjective, "coker g = " + to_string(coker_g)};
  return {};
}

/// Block sum of two sequences.
inline SES direct_sum(const SES& x, const SES& y) {
  return {direct_sum(x.a, y.a), direct_sum(x.b, y.b), direct_sum(x.c, y.c),
          block_diagonal(x.f, y.f), block_diagonal(x.g, y.g)};
}

/// 0 -> A -> A+B -> B -> 0 with inclusion and projection.
inline SES family_split(const FGModule& a, const FGModule& b) {
  Presentation pa = to_presentation(a), pb = to_presentation(b);
  const std::size_t na = pa.generators, nb = pb.generators;
  IntMatrix f(na + nb, na), g(nb, na + nb);
  for (std::size_t i = 0; i < na; ++i) f(i, i) = 1;
  for (std::size_t i = 0; i < nb; ++i) g(i, na + i) = 1;
  return {pa, direct_sum(pa, pb), pb, std::move(f), std::move(g)};
}

/// Adds 0 -> X -> X+X -> X -> 0 to an existing sequence, padding all three
/// terms with X.
inline SES pad(const SES& s, const FGModule& x) {
  if (x.is_zero()) return s;
  return direct_sum(s, family_split(x, x));
}

/// 0 -> M --(p^t on the first free coordinate, identity elsewhere)--> M -> Z/p^t -> 0.
inline SES family_mult_cyclic(const FGModule& m, Prime p, unsigned t) {
  if (m.rank() == 0) throw std::domain_error("family_mult_cyclic needs a module of positive rank");
  if (p.is_generic()) throw std::domain_error("family_mult_cyclic needs a nonzero prime");
  if (t == 0) throw std::domain_error("family_mult_cyclic needs t >= 1");
  Presentation pm = to_presentation(m);
  const std::size_t n = pm.generators;
  const Integer q = prime_power(p, t);
  IntMatrix f = IntMatrix::identity(n);
  f(0, 0) = q;
  IntMatrix g(1, n);
  g(0, 0) = 1;
  return {pm, pm, Presentation::diagonal({q}), std::move(f), std::move(g)};
}

/// 0 -> Tor(M) -> M -> M / Tor(M) -> 0.
inline SES family_torsion_strip(const FGModule& m) {
  Presentation pt = to_presentation(m.torsion_part());
  Presentation pm = to_presentation(m);
  Presentation pf = to_presentation(m.free_part());
  const std::size_t r = m.rank(), nt = pt.generators;
  IntMatrix f(r + nt, nt), g(r, r + nt);
  for (std::size_t i = 0; i < nt; ++i) f(r + i, i) = 1;
  for (std::size_t i = 0; i < r; ++i) g(i, i) = 1;
  return {pt, pm, pf, std::move(f), std::move(g)};
}

namespace detail {

inline void require_p_torsion(const FGModule& g, Prime p, const char* who) {
  if (!g.is_p_torsion(p))
    throw std::domain_error(std::string(who) + ": padding module must be " + p.str() + "-torsion");
}

}  // namespace detail

/// Lowers the top exponent r of Z/p^r + G by one while splitting off Z/p.
/// Both sequences have sub Z/p^r + G and middle (Z/p^{r-1} + G) + (Z/p^{r+1} + G);
/// quotients are Z/p^r + G and Z/p^{r-1} + Z/p + G respectively.
inline std::pair<SES, SES> family_step1(Prime p, unsigned r, const FGModule& g) {
  if (r < 2) throw std::domain_error("family_step1 needs r >= 2");
  if (p.is_generic()) throw std::domain_error("family_step1 needs a nonzero prime");
  detail::require_p_torsion(g, p, "family_step1");
  const Integer pp = p.value();
  const Integer lo = prime_power(p, r - 1), mid = prime_power(p, r), hi = prime_power(p, r + 1);
  Presentation sub = Presentation::diagonal({mid});
  Presentation middle = Presentation::diagonal({lo, hi});

  // 1 -> (1, p): order p^r; the quotient is cyclic, read by (x, y) -> p x - y.
  SES first{sub, middle, Presentation::diagonal({mid}), IntMatrix{{1}, {pp}}, IntMatrix{{pp, -1}}};
  // 1 -> (0, p): quotient Z/p^{r-1} + Z/p.
  SES second{sub, middle, Presentation::diagonal({lo, pp}), IntMatrix{{0}, {pp}},
             IntMatrix::identity(2)};
  return {pad(first, g), pad(second, g)};
}

/// Merges Z/p + Z/p^r + G into Z/p^{r+1} + G. Both sequences have sub
/// Z/p + Z/p^r + G and middle Z/p + Z/p^{r+1} + Z/p^r + G + G; the first
/// quotient is Z/p + Z/p^r + G, the second Z/p^{r+1} + G.
inline std::pair<SES, SES> family_step2(Prime p, unsigned r, const FGModule& g) {
  if (r < 1) throw std::domain_error("family_step2 needs r >= 1");
  if (p.is_generic()) throw std::domain_error("family_step2 needs a nonzero prime");
  detail::require_p_torsion(g, p, "family_step2");
  const Integer pp = p.value();
  const Integer pr = prime_power(p, r), pr1 = prime_power(p, r + 1);
  Presentation sub = Presentation::diagonal({pp, pr});
  Presentation middle = Presentation::diagonal({pp, pr1, pr});

  // Z/p onto the first summand, Z/p^r into Z/p^{r+1} by p.
  SES first{sub, middle, Presentation::diagonal({pp, pr}), IntMatrix{{1, 0}, {0, pp}, {0, 0}},
            IntMatrix{{0, 1, 0}, {0, 0, 1}}};
  // Z/p and Z/p^r onto the first and third summands.
  SES second{sub, middle, Presentation::diagonal({pr1}), IntMatrix{{1, 0}, {0, 0}, {0, 1}},
             IntMatrix{{0, 1, 0}}};
  return {pad(first, g), pad(second, g)};
}

}  // namespace twothree
