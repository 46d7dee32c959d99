#include "twothree/json_io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace twothree;
namespace io = twothree::json;
using io::FormatError;
using Json = io::json;

namespace {

const Prime P2 = Prime::of(2), P3 = Prime::of(3);

FGModule M(const char* s) { return parse_module(s); }

// Text round trip, as a consumer in another process would see it.
Json reparse(const Json& j) { return Json::parse(j.dump()); }

bool all_numbers_are_strings(const Json& j) {
  if (j.is_number()) return false;
  if (j.is_array() || j.is_object())
    for (const auto& v : j)
      if (!all_numbers_are_strings(v)) return false;
  return true;
}

}  // namespace

TEST(JsonMatrix, RoundTrip) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> e(-50, 50);
  for (int t = 0; t < 50; ++t) {
    IntMatrix m(rng() % 5, rng() % 5);
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = e(rng);
    Json j = reparse(io::to_json(m));
    EXPECT_TRUE(all_numbers_are_strings(j));
    EXPECT_EQ(io::matrix_from_json(j), m);
  }
  IntMatrix big(1, 1);
  big(0, 0) = parse_integer("-123456789012345678901234567890");
  EXPECT_EQ(io::to_json(big)["entries"][0][0], "-123456789012345678901234567890");
  EXPECT_EQ(io::matrix_from_json(reparse(io::to_json(big))), big);
}

TEST(JsonMatrix, AcceptsPlainNumbersAndRejectsBadShapes) {
  Json j = Json::parse(R"({"rows": 2, "cols": 2, "entries": [[2, 4], [6, 8]]})");
  EXPECT_EQ(io::matrix_from_json(j), (IntMatrix{{2, 4}, {6, 8}}));
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"rows": 2, "cols": 2, "entries": [[1, 2]]})")),
               FormatError);
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"rows": 1, "cols": 2, "entries": [[1]]})")), FormatError);
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"cols": 1, "entries": [[1]]})")), FormatError);
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"rows": 1, "cols": 1, "entries": [[1.5]]})")),
               FormatError);
  EXPECT_THROW(io::matrix_from_json(Json::parse(R"({"rows": -1, "cols": 1, "entries": []})")), FormatError);
}

TEST(JsonSnf, RoundTrip) {
  SNFResult s = smith_normal_form(IntMatrix{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  SNFResult back = io::snf_from_json(reparse(io::to_json(s)));
  EXPECT_EQ(back.U, s.U);
  EXPECT_EQ(back.D, s.D);
  EXPECT_EQ(back.V, s.V);
}

TEST(JsonModule, FormatAndRoundTrip) {
  Json j = io::to_json(M("Z^2 + Z/4 + Z/2 + Z/9"));
  EXPECT_EQ(j, Json::parse(R"({"rank": "2", "torsion": {"2": ["2", "1"], "3": ["2"]}})"));
  EXPECT_EQ(io::module_from_json(Json::parse(R"({"rank": 1, "torsion": {"2": [2, 1], "3": [2]}})")),
            M("Z + Z/4 + Z/2 + Z/9"));
  EXPECT_EQ(io::module_from_json(Json::parse(R"({"rank": "0"})")), FGModule::zero());
  for (const auto& x : enumerate_modules({{P2, P3, Prime::of(7)}, 2, 3, 144}))
    ASSERT_EQ(io::module_from_json(reparse(io::to_json(x))), x);
}

TEST(JsonModule, Rejections) {
  for (const char* bad : {R"({"torsion": {}})", R"({"rank": "1", "torsion": {"4": [1]}})",
                          R"({"rank": "1", "torsion": {"0": [1]}})", R"({"rank": "1", "torsion": {"2": [1, 2]}})",
                          R"({"rank": "1", "torsion": {"2": []}})", R"({"rank": "1", "torsion": {"2": "1"}})",
                          R"({"rank": "-1"})", R"({"rank": "x"})"})
    EXPECT_ANY_THROW(io::module_from_json(Json::parse(bad))) << bad;
}

TEST(JsonDescriptor, FormatAndRoundTrip) {
  const SubcatDescriptor f{TorsionF{Lattice::from_generators({P2, P3}, {{2, 1}}), Outside::Forbidden}};
  EXPECT_EQ(io::to_json(f), Json::parse(R"({"kind": "torsionF", "support": ["2", "3"],
                                             "basis": [["2", "1"]], "outside": "forbidden"})"));
  EXPECT_EQ(io::to_json(SubcatDescriptor{IMod{2}}), Json::parse(R"({"kind": "imod", "k": "2"})"));
  EXPECT_EQ(io::to_json(SubcatDescriptor{EmptySubcat{}}), Json::parse(R"({"kind": "empty"})"));

  EXPECT_TRUE(descriptor_equal(
      io::descriptor_from_json(Json::parse(R"({"kind": "torsionF", "support": ["2","3"], "basis": [[2,1]],
                                                 "outside": "forbidden"})")),
      f));
  EXPECT_TRUE(descriptor_equal(io::descriptor_from_json(Json::parse(R"({"kind": "imod", "k": 2})")), IMod{2}));

  std::vector<SubcatDescriptor> samples{EmptySubcat{}, IMod{1}, IMod{6}, zero_subcat(), all_torsion(), f,
                                        TorsionF{Lattice::full({P3}), Outside::Free},
                                        TorsionF{Lattice::from_generators({P2, P3}, {{4, 0}, {0, 3}}),
                                                 Outside::Forbidden}};
  for (const auto& d : samples) {
    SubcatDescriptor back = io::descriptor_from_json(reparse(io::to_json(d)));
    EXPECT_TRUE(descriptor_equal(back, d)) << classify(d);
    EXPECT_EQ(classify(back), classify(d));
  }
}

TEST(JsonDescriptor, Rejections) {
  for (const char* bad : {R"({"kind": "imod", "k": "0"})", R"({"kind": "imod"})", R"({"kind": "other"})",
                          R"({"kind": "torsionF", "support": ["2"], "basis": [[1, 1]]})",
                          R"({"kind": "torsionF", "support": ["3", "2"], "basis": []})",
                          R"({"kind": "torsionF", "support": ["2"], "basis": [], "outside": "maybe"})"})
    EXPECT_ANY_THROW(io::descriptor_from_json(Json::parse(bad))) << bad;
}

TEST(JsonSes, RoundTrip) {
  for (const SES& s : {family_split(M("Z/2"), M("Z + Z/3")), family_mult_cyclic(M("Z^2"), P3, 2),
                       family_torsion_strip(M("Z + Z/4")), family_step1(P2, 2, M("Z/2")).first,
                       family_step2(P3, 1, M("Z/3 + Z/9")).second}) {
    SES back = io::ses_from_json(reparse(io::to_json(s)));
    EXPECT_EQ(back, s);
    EXPECT_TRUE(verify_ses(back).verified());
  }
  EXPECT_THROW(io::presentation_from_json(Json::parse(
                   R"({"generators": "2", "relations": {"rows": "1", "cols": "0", "entries": [[]]}})")),
               FormatError);
}

TEST(JsonDerivation, RoundTripPreservesVerification) {
  for (auto [gens, target] : std::vector<std::pair<std::vector<FGModule>, FGModule>>{
           {{M("Z/2")}, M("Z/4 + Z/2 + Z/2")},
           {{M("Z + Z/3")}, M("Z^2 + Z/8")},
           {{M("Z/4 + Z/3"), M("Z/2 + Z/3")}, M("Z/2")}}) {
    Derivation d = derive_witness(gens, target);
    Json j = reparse(io::to_json(d));
    EXPECT_TRUE(all_numbers_are_strings(j));
    Derivation back = io::derivation_from_json(j);
    EXPECT_EQ(back.generators, d.generators);
    EXPECT_EQ(back.target, d.target);
    ASSERT_EQ(back.steps.size(), d.steps.size());
    for (std::size_t i = 0; i < d.steps.size(); ++i) {
      EXPECT_EQ(back.steps[i].rule, d.steps[i].rule);
      EXPECT_EQ(back.steps[i].premises, d.steps[i].premises);
      EXPECT_EQ(back.steps[i].ses, d.steps[i].ses);
      EXPECT_EQ(back.steps[i].conclusion, d.steps[i].conclusion);
    }
    EXPECT_TRUE(verify_derivation(back).verified);
    EXPECT_EQ(io::to_json(back), j);
  }
}

TEST(JsonDerivation, Rejections) {
  Json j = io::to_json(derive_witness({M("Z/2")}, M("Z/4")));
  Json bad_rule = j;
  bad_rule["steps"][1]["rule"] = "Guess";
  EXPECT_THROW(io::derivation_from_json(bad_rule), FormatError);
  Json bad_pos = j;
  bad_pos["steps"].back()["premises"][0]["position"] = "Side";
  EXPECT_THROW(io::derivation_from_json(bad_pos), FormatError);
  Json no_target = j;
  no_target.erase("target");
  EXPECT_THROW(io::derivation_from_json(no_target), FormatError);
}

TEST(JsonReport, Format) {
  SandwichReport r = sandwich_check({M("Z/2")}, {{P2}, 0, 3, 144});
  Json j = reparse(io::to_json(r));
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_EQ(j["universe_size"], "7");
  EXPECT_TRUE(j["witnesses"].empty());
  EXPECT_TRUE(all_numbers_are_strings(j));
  EXPECT_TRUE(descriptor_equal(io::descriptor_from_json(j["descriptor"]), closure({M("Z/2")})));
}
