#include "twothree/fg_module.hpp"
#include "twothree/oracle.hpp"
#include "twothree/ses.hpp"

#include <gtest/gtest.h>

using namespace twothree;

namespace {

const Prime P2 = Prime::of(2), P3 = Prime::of(3), P5 = Prime::of(5);

FGModule M(const char* s) { return parse_module(s); }
Presentation pres(const char* s) { return to_presentation(parse_module(s)); }

void expect_additive(const SES& s) {
  const FGModule a = s.sub(), b = s.middle(), c = s.quotient();
  EXPECT_EQ(b.rank(), a.rank() + c.rank());
  for (Prime p : {Prime::generic(), P2, P3, P5, Prime::of(7)})
    EXPECT_EQ(chi(b, p), chi(a, p) + chi(c, p)) << a << " -> " << b << " -> " << c;
}

std::vector<FGModule> p_torsion_up_to(Prime p, unsigned len) {
  std::vector<FGModule> out;
  for (const auto& x : enumerate_modules({{p}, 0, len, 1}))
    out.push_back(x);
  return out;
}

}  // namespace

TEST(Morphism, WellDefinedness) {
  EXPECT_TRUE(is_well_defined({pres("Z/2"), pres("Z/4"), IntMatrix{{2}}}));
  EXPECT_FALSE(is_well_defined({pres("Z/2"), pres("Z/4"), IntMatrix{{1}}}));
  EXPECT_FALSE(is_well_defined({pres("Z/2"), pres("Z"), IntMatrix{{1}}}));
  EXPECT_FALSE(is_well_defined({pres("Z"), pres("Z"), IntMatrix{{1, 0}}}));
  EXPECT_THROW(kernel({pres("Z/2"), pres("Z"), IntMatrix{{1}}}), IllDefinedMorphism);
  EXPECT_THROW(cokernel({pres("Z/2"), pres("Z"), IntMatrix{{1}}}), IllDefinedMorphism);
}

TEST(Kernel, Examples) {
  EXPECT_EQ(kernel({pres("Z^2"), pres("Z^2"), IntMatrix::identity(2)}), FGModule::zero());
  EXPECT_EQ(kernel({pres("Z^2"), pres("Z^2"), IntMatrix{{1, 0}, {0, 0}}}), FGModule::free(1));
  EXPECT_EQ(kernel({pres("Z/2"), pres("Z/2"), IntMatrix{{4}}}), M("Z/2"));
  EXPECT_EQ(kernel({pres("Z/4"), pres("Z/4"), IntMatrix{{2}}}), M("Z/2"));
  EXPECT_EQ(kernel({Presentation::diagonal({0, 6}), pres("Z/3"), IntMatrix{{1, 1}}}), M("Z + Z/2"));
  EXPECT_EQ(kernel({pres("Z"), pres("Z/8"), IntMatrix{{2}}}), FGModule::free(1));
  EXPECT_EQ(kernel({pres("0"), pres("Z"), IntMatrix(1, 0)}), FGModule::zero());
}

TEST(Cokernel, Examples) {
  EXPECT_EQ(cokernel({pres("Z"), pres("Z"), IntMatrix{{4}}}), M("Z/4"));
  EXPECT_EQ(cokernel({Presentation::diagonal({6}), Presentation::diagonal({6}), IntMatrix{{1}}}), FGModule::zero());
  EXPECT_EQ(cokernel({pres("Z"), pres("Z/2"), IntMatrix{{0}}}), M("Z/2"));
  EXPECT_EQ(cokernel({pres("0"), pres("Z + Z/3"), IntMatrix(2, 0)}), M("Z + Z/3"));
}

TEST(VerifySes, Examples) {
  EXPECT_TRUE(verify_ses(family_split(M("Z/2"), M("Z + Z/9"))).verified());
  SES mult{pres("Z"), pres("Z"), pres("Z/4"), IntMatrix{{4}}, IntMatrix{{1}}};
  EXPECT_TRUE(verify_ses(mult).verified());
  SES bad{pres("Z"), pres("Z"), pres("Z/4"), IntMatrix{{2}}, IntMatrix{{1}}};
  SESVerdict v = verify_ses(bad);
  EXPECT_FALSE(v.verified());
  EXPECT_EQ(v.failure, SESFailure::ImageNotKernel);
}

TEST(VerifySes, NamesFirstFailedCondition) {
  SES not_injective{pres("Z/4"), pres("Z/4"), pres("Z/4"), IntMatrix{{2}}, IntMatrix{{1}}};
  EXPECT_EQ(verify_ses(not_injective).failure, SESFailure::NotInjective);
  SES not_surjective{pres("Z"), pres("Z^2"), pres("Z"), IntMatrix{{1}, {0}}, IntMatrix{{0, 2}}};
  EXPECT_EQ(verify_ses(not_surjective).failure, SESFailure::NotSurjective);
  SES kernel_too_big{pres("0"), pres("Z/4"), pres("Z/2"), IntMatrix(1, 0), IntMatrix{{1}}};
  EXPECT_EQ(verify_ses(kernel_too_big).failure, SESFailure::ImageNotKernel);
  SES ill{pres("Z/2"), pres("Z"), pres("Z"), IntMatrix{{1}}, IntMatrix{{1}}};
  EXPECT_THROW(verify_ses(ill), IllDefinedMorphism);
}

TEST(FamilySplit, Examples) {
  SES a = family_split(M("Z/2"), M("Z/3"));
  EXPECT_TRUE(verify_ses(a).verified());
  EXPECT_EQ(a.middle(), M("Z/6"));
  SES b = family_split(FGModule::zero(), M("Z + Z/4"));
  EXPECT_TRUE(verify_ses(b).verified());
  EXPECT_EQ(b.middle(), M("Z + Z/4"));
  SES c = family_split(M("Z"), M("Z"));
  EXPECT_TRUE(verify_ses(c).verified());
  EXPECT_EQ(c.middle().rank(), 2u);
}

TEST(FamilyMultCyclic, Examples) {
  SES a = family_mult_cyclic(M("Z"), P2, 2);
  EXPECT_TRUE(verify_ses(a).verified());
  EXPECT_EQ(a.f, (IntMatrix{{4}}));
  EXPECT_EQ(a.quotient(), M("Z/4"));
  SES b = family_mult_cyclic(M("Z + Z/3"), P2, 1);
  EXPECT_TRUE(verify_ses(b).verified());
  EXPECT_EQ(b.sub(), M("Z + Z/3"));
  EXPECT_EQ(b.middle(), M("Z + Z/3"));
  EXPECT_EQ(b.quotient(), M("Z/2"));
  SES c = family_mult_cyclic(M("Z^2"), P3, 2);
  EXPECT_TRUE(verify_ses(c).verified());
  EXPECT_EQ(c.quotient(), M("Z/9"));
  EXPECT_THROW(family_mult_cyclic(M("Z/2"), P2, 1), std::domain_error);
  EXPECT_THROW(family_mult_cyclic(M("Z"), P2, 0), std::domain_error);
}

TEST(FamilyTorsionStrip, Examples) {
  SES a = family_torsion_strip(M("Z + Z/2"));
  EXPECT_TRUE(verify_ses(a).verified());
  EXPECT_EQ(a.sub(), M("Z/2"));
  EXPECT_EQ(a.quotient(), M("Z"));
  SES b = family_torsion_strip(M("Z/4 + Z/3"));
  EXPECT_TRUE(verify_ses(b).verified());
  EXPECT_EQ(b.quotient(), FGModule::zero());
  SES c = family_torsion_strip(M("Z^3"));
  EXPECT_TRUE(verify_ses(c).verified());
  EXPECT_EQ(c.sub(), FGModule::zero());
}

TEST(FamilyStep1, Examples) {
  auto [a1, a2] = family_step1(P2, 2, FGModule::zero());
  EXPECT_EQ(a1.middle(), M("Z/2 + Z/8"));
  EXPECT_EQ(a1.sub(), M("Z/4"));
  EXPECT_EQ(a1.quotient(), M("Z/4"));
  EXPECT_EQ(a2.quotient(), M("Z/2 + Z/2"));
  EXPECT_TRUE(verify_ses(a1).verified());
  EXPECT_TRUE(verify_ses(a2).verified());

  auto [b1, b2] = family_step1(P2, 3, M("Z/2"));
  EXPECT_EQ(b1.sub(), M("Z/8 + Z/2"));
  EXPECT_EQ(b1.middle(), M("Z/4 + Z/2 + Z/16 + Z/2"));
  EXPECT_EQ(b1.quotient(), M("Z/8 + Z/2"));
  EXPECT_EQ(b2.quotient(), M("Z/4 + Z/2 + Z/2"));
  EXPECT_TRUE(verify_ses(b1).verified());
  EXPECT_TRUE(verify_ses(b2).verified());

  auto [c1, c2] = family_step1(P3, 2, FGModule::zero());
  EXPECT_EQ(c1.middle(), M("Z/3 + Z/27"));
  EXPECT_TRUE(verify_ses(c1).verified());
  EXPECT_TRUE(verify_ses(c2).verified());

  EXPECT_THROW(family_step1(P2, 1, FGModule::zero()), std::domain_error);
  EXPECT_THROW(family_step1(P2, 2, M("Z/3")), std::domain_error);
}

TEST(FamilyStep2, Examples) {
  auto [a1, a2] = family_step2(P2, 1, FGModule::zero());
  EXPECT_EQ(a1.sub(), M("Z/2 + Z/2"));
  EXPECT_EQ(a1.quotient(), M("Z/2 + Z/2"));
  EXPECT_EQ(a2.quotient(), M("Z/4"));
  EXPECT_EQ(a1.middle(), M("Z/2 + Z/4 + Z/2"));
  EXPECT_TRUE(verify_ses(a1).verified());
  EXPECT_TRUE(verify_ses(a2).verified());

  auto [b1, b2] = family_step2(P2, 2, M("Z/2"));
  EXPECT_EQ(b2.quotient(), M("Z/8 + Z/2"));
  EXPECT_EQ(b1.middle(), M("Z/2 + Z/8 + Z/4 + Z/2 + Z/2"));
  EXPECT_TRUE(verify_ses(b1).verified());
  EXPECT_TRUE(verify_ses(b2).verified());

  auto [c1, c2] = family_step2(P5, 1, FGModule::zero());
  EXPECT_EQ(c2.quotient(), M("Z/25"));
  EXPECT_TRUE(verify_ses(c1).verified());
  EXPECT_TRUE(verify_ses(c2).verified());

  EXPECT_THROW(family_step2(P2, 0, FGModule::zero()), std::domain_error);
  EXPECT_THROW(family_step2(P3, 1, M("Z/2")), std::domain_error);
}

TEST(Families, SweepVerifiesAndIsAdditive) {
  for (Prime p : {P2, P3, P5}) {
    const auto gs = p_torsion_up_to(p, 3);
    for (const auto& g : gs) {
      for (unsigned r = 2; r <= 4; ++r) {
        auto [s1, s2] = family_step1(p, r, g);
        ASSERT_TRUE(verify_ses(s1).verified());
        ASSERT_TRUE(verify_ses(s2).verified());
        expect_additive(s1);
        expect_additive(s2);
      }
      for (unsigned r = 1; r <= 4; ++r) {
        auto [s1, s2] = family_step2(p, r, g);
        ASSERT_TRUE(verify_ses(s1).verified());
        ASSERT_TRUE(verify_ses(s2).verified());
        expect_additive(s1);
        expect_additive(s2);
      }
    }
  }
}

TEST(Families, SplitAndRankFamiliesOverUniverse) {
  const auto all = enumerate_modules({{P2, P3}, 2, 2, 1});
  for (std::size_t i = 0; i < all.size(); i += 5)
    for (std::size_t j = 0; j < all.size(); j += 7) {
      SES s = family_split(all[i], all[j]);
      ASSERT_TRUE(verify_ses(s).verified());
      expect_additive(s);
    }
  for (const auto& m : all) {
    SES s = family_torsion_strip(m);
    ASSERT_TRUE(verify_ses(s).verified());
    expect_additive(s);
    if (m.rank() == 0) continue;
    for (Prime p : {P2, P3, P5})
      for (unsigned t = 1; t <= 3; ++t) {
        SES c = family_mult_cyclic(m, p, t);
        ASSERT_TRUE(verify_ses(c).verified());
        expect_additive(c);
      }
  }
}

TEST(Families, DirectSumAndPadding) {
  SES a = family_mult_cyclic(M("Z"), P3, 1);
  SES b = family_split(M("Z/2"), M("Z/4"));
  SES s = direct_sum(a, b);
  EXPECT_TRUE(verify_ses(s).verified());
  EXPECT_EQ(s.middle(), M("Z + Z/4 + Z/2"));
  SES padded = pad(a, M("Z/5"));
  EXPECT_TRUE(verify_ses(padded).verified());
  EXPECT_EQ(padded.middle(), M("Z + Z/5 + Z/5"));
  EXPECT_EQ(pad(a, FGModule::zero()), a);
}
