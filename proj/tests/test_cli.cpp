#include "cli.hpp"

#include "twothree/twothree.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace twothree;
using Json = twothree::json::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int code = cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

// Drops '# ' preamble lines.
std::string body(const std::string& s) {
  std::istringstream in(s);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("# ", 0) != 0) out += line + "\n";
  return out;
}

Json first_json(const std::string& s) {
  std::istringstream in(body(s));
  Json j;
  in >> j;
  return j;
}

std::vector<std::string> lines(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("twothree_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST(Cli, ClosureExample) {
  Result r = run({"closure", "Z/2"});
  EXPECT_EQ(r.code, 0);
  auto ls = lines(r.out);
  ASSERT_FALSE(ls.empty());
  EXPECT_EQ(ls.front().rfind("# ", 0), 0u);
  EXPECT_EQ(ls.back(), "F({2}, Z)");

  Result q = run({"--quiet", "closure", "Z/2"});
  EXPECT_EQ(q.out, body(r.out));
  SubcatDescriptor d = json::descriptor_from_json(first_json(q.out));
  EXPECT_TRUE(descriptor_equal(d, TorsionF{Lattice::full({Prime::of(2)}), Outside::Forbidden}));

  EXPECT_EQ(lines(run({"closure", "Z^2 + Z/5"}).out).back(), "I_2");
  EXPECT_EQ(lines(run({"closure", "Z/2 + Z/2"}).out).back(), "F({2}, 2Z)");
  EXPECT_EQ(lines(run({"closure", "Z/4 + Z/3", "-q"}).out).back(), "F({2,3}, <(2,1)>)");
}

TEST_F(CliFiles, MemberExample) {
  const std::string imod2 = write("imod2.json", R"({"kind": "imod", "k": "2"})");
  Result r = run({"member", "--desc", imod2, "Z^2 + Z/7"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(lines(r.out).back(), "true");
  EXPECT_EQ(run({"member", "--desc", imod2, "Z^3"}).code, 1);
  EXPECT_EQ(run({"member", "--desc", imod2, "Z/9"}).code, 0);
}

TEST_F(CliFiles, ClosureOutputFeedsMember) {
  Result c = run({"closure", "Z/2 + Z/2"});
  const std::string desc = write("even.json", c.out);
  EXPECT_EQ(run({"member", "--desc", desc, "Z/4"}).code, 0);
  EXPECT_EQ(run({"member", "--desc", desc, "Z/8"}).code, 1);
  EXPECT_EQ(run({"member", "--desc", desc, "Z/3 + Z/2 + Z/2"}).code, 1);
}

TEST(Cli, WitnessPipesIntoVerify) {
  Result w = run({"witness", "--gen", "Z/2", "--target", "Z/4 + Z/2 + Z/2"});
  ASSERT_EQ(w.code, 0) << w.err;
  Result v = run({"verify", "-"}, w.out);
  EXPECT_EQ(v.code, 0) << v.err;
  EXPECT_EQ(lines(v.out).back(), "Verified");
  Result vq = run({"verify", "-", "--quiet"}, w.out);
  EXPECT_EQ(vq.out, "Verified\n");
}

TEST_F(CliFiles, WitnessToFileAndTamper) {
  const std::string file = path("d.json");
  Result w = run({"witness", "--gen", "Z + Z/3", "--target", "Z^2 + Z/8", "-o", file});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(run({"verify", file}).code, 0);

  std::ifstream f(file);
  Json j = Json::parse(f);
  j["steps"].back()["conclusion"]["rank"] = "3";
  const std::string bad = write("bad.json", j.dump());
  Result v = run({"verify", bad});
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("Rejected at step"), std::string::npos);
}

TEST_F(CliFiles, VerifySingleSes) {
  const SES s = family_step1(Prime::of(3), 2, parse_module("Z/3")).first;
  EXPECT_EQ(run({"verify", write("s.json", json::to_json(s).dump())}).code, 0);
  SES bad = s;
  bad.g = IntMatrix(bad.g.rows(), bad.g.cols());
  Result r = run({"verify", write("bad.json", json::to_json(bad).dump())});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("Rejected"), std::string::npos);
  SES ill = family_split(parse_module("Z/2"), parse_module("Z/3"));
  ill.f(0, 0) = 1;
  ill.a = Presentation::diagonal({4});
  EXPECT_EQ(run({"verify", write("ill.json", json::to_json(ill).dump())}).code, 1);
}

TEST_F(CliFiles, Snf) {
  const IntMatrix a{{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}};
  Result r = run({"snf", write("a.json", json::to_json(a).dump()), "-q"});
  ASSERT_EQ(r.code, 0) << r.err;
  SNFResult s = json::snf_from_json(Json::parse(r.out));
  EXPECT_EQ(s.U * a * s.V, s.D);
  EXPECT_EQ(s.D, IntMatrix::diagonal({2, 6, 12}));
  EXPECT_EQ(run({"snf", "-", "-q"}, json::to_json(a).dump()).out, r.out);
}

TEST(Cli, Chi) {
  Result r = run({"chi", "Z^2 + Z/4 + Z/9", "-q"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "chi_0 = 2\nchi_2 = INFINITE\nchi_3 = INFINITE\n");
  EXPECT_EQ(run({"chi", "Z/4 + Z/8", "-p", "2", "-q"}).out, "chi_2 = 5\n");
  EXPECT_EQ(run({"chi", "Z/4 + Z/9", "-q"}).out, "chi_0 = 0\nchi_2 = 2\nchi_3 = 2\n");
  EXPECT_EQ(run({"chi", "Z/4", "-p", "3", "-q"}).out, "chi_3 = 0\n");
  EXPECT_EQ(run({"chi", "Z/4", "-p", "4"}).code, 2);
}

TEST(Cli, EnumerateAndSandwich) {
  Result e = run({"enumerate", "--primes", "2,3", "--rank", "2", "--length", "3", "-q"});
  EXPECT_EQ(e.code, 0);
  EXPECT_EQ(lines(e.out).size(), enumerate_modules(default_bounds()).size());
  EXPECT_EQ(lines(e.out).front(), "0");

  Result s = run({"sandwich", "--gen", "Z/4 + Z/3", "--primes", "2,3", "--rank", "0", "--length", "3", "-q"});
  EXPECT_EQ(s.code, 0) << s.err;
  Json j = Json::parse(s.out);
  EXPECT_EQ(j["verdict"], "PASS");
  EXPECT_TRUE(descriptor_equal(json::descriptor_from_json(j["descriptor"]), closure({parse_module("Z/4 + Z/3")})));
}

TEST_F(CliFiles, K0Verbs) {
  Result to = run({"k0", "to-subcat", "--support", "2,3", "--basis", "2,1", "--basis", "0,3", "-q"});
  ASSERT_EQ(to.code, 0) << to.err;
  const std::string desc = write("d.json", to.out);
  Result from = run({"k0", "from-subcat", "--desc", desc, "--support", "2,3", "-q"});
  ASSERT_EQ(from.code, 0) << from.err;
  Json j = Json::parse(from.out);
  Lattice back = json::lattice_from_json({Prime::of(2), Prime::of(3)}, j["basis"]);
  EXPECT_EQ(back, Lattice::from_generators({Prime::of(2), Prime::of(3)}, {{2, 1}, {0, 3}}));

  Result f = run({"k0", "failure-demo", "-q"});
  EXPECT_EQ(f.code, 0);
  EXPECT_EQ(lines(f.out).back(), "F({2}, Z) != F({3}, Z)");
  EXPECT_EQ(run({"k0"}).code, 2);
}

TEST(Cli, DemoNotWide) {
  Result r = run({"demo-not-wide", "2", "-q"});
  ASSERT_EQ(r.code, 0);
  Json j = first_json(r.out);
  EXPECT_EQ(json::module_from_json(j["kernel"]), FGModule::free(1));
  EXPECT_TRUE(j["source_in_I_k"].get<bool>());
  EXPECT_FALSE(j["kernel_in_I_k"].get<bool>());
  EXPECT_EQ(lines(r.out).back(), "kernel Z is not in I_2");
  EXPECT_EQ(run({"demo-not-wide", "1"}).code, 1);
}

TEST_F(CliFiles, ErrorsAndExitCodes) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"closure"}).code, 2);
  Result p = run({"closure", "Z/"});
  EXPECT_EQ(p.code, 2);
  EXPECT_FALSE(p.err.empty());
  EXPECT_EQ(run({"snf", path("missing.json")}).code, 2);
  EXPECT_EQ(run({"snf", write("junk.json", "{not json")}).code, 2);
  EXPECT_EQ(run({"snf", write("shape.json", R"({"rows": "1"})")}).code, 2);
  Result w = run({"witness", "--gen", "Z/2 + Z/2", "--target", "Z/2"});
  EXPECT_EQ(w.code, 1);
  EXPECT_NE(w.err.find("lattice"), std::string::npos) << w.err;
  EXPECT_EQ(run({"enumerate", "--primes", "4", "--rank", "0", "--length", "1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliFiles, FileExpressionsAndDeterminism) {
  const std::string e = write("m.txt", "  Z^2 + Z/5\n");
  EXPECT_EQ(lines(run({"closure", "@" + e}).out).back(), "I_2");
  EXPECT_EQ(run({"chi", "@" + path("nope.txt")}).code, 2);

  const std::vector<std::string> cmd{"witness", "--gen", "Z/4 + Z/3", "--gen", "Z/2 + Z/3", "--target", "Z/2"};
  EXPECT_EQ(run(cmd).out, run(cmd).out);
  EXPECT_EQ(run({"witness", "--gen", "Z/4 + Z/3", "Z/2 + Z/3", "--target", "Z/2"}).out, run(cmd).out);
}
