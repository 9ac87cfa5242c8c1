#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "cli.hpp"

using ipspace::cli::run;
using json = nlohmann::json;

namespace {

std::string fx(const std::string& name) { return std::string(IPSPACE_FIXTURES) + "/" + name; }

ipspace::cli::RunResult go(std::vector<std::string> args) {
  args.insert(args.begin(), "ipspace");
  return run(args);
}

}  // namespace

TEST(Cli, ClassifyL1) {
  const auto r = go({"classify", fx("l1_plane.json"), "--budget", "500"});
  ASSERT_EQ(r.exit_code, 0) << r.report.dump();
  EXPECT_EQ(r.report["command"], "classify");
  EXPECT_EQ(r.report["version"], "0.1.0");
  EXPECT_TRUE(r.report.contains("timestamp"));
  EXPECT_EQ(r.report["results"]["verdict"], "not-inner-product");
  EXPECT_EQ(r.report["results"]["conditions"].size(), 11u);
  EXPECT_EQ(r.report["config"]["budget"], 500);
  EXPECT_EQ(r.report["config"]["space"]["norm"]["p"], 1.0);
  for (const auto& c : r.report["results"]["conditions"])
    if (c["condition"] == "I6") {
      EXPECT_EQ(c["params"]["implemented_constant"], 4);
      EXPECT_EQ(c["params"]["printed_constant"], 8);
    }
}

TEST(Cli, ClassifyEuclideanKinds) {
  for (const char* f : {"l2_space.json", "quadratic_diag.json", "complex_l2.json"}) {
    const auto r = go({"classify", fx(f), "--budget", "300"});
    ASSERT_EQ(r.exit_code, 0) << f;
    EXPECT_EQ(r.report["results"]["verdict"], "inner-product-like") << f;
  }
}

TEST(Cli, CmFixtures) {
  const auto eq = go({"cm", fx("equilateral.json")});
  ASSERT_EQ(eq.exit_code, 0);
  EXPECT_NEAR(eq.report["results"]["det"].get<double>(), -3.0, 1e-9);
  EXPECT_FALSE(eq.report["results"]["affinely_dependent"].get<bool>());
  const auto col = go({"cm", fx("collinear.json")});
  EXPECT_TRUE(col.report["results"]["affinely_dependent"].get<bool>());
  const auto sq = go({"cm", fx("l1_square.json")});
  EXPECT_EQ(sq.exit_code, 2);
  EXPECT_EQ(sq.report["error"]["name"], "NotEuclideanRealizable");
}

TEST(Cli, Trilaterate) {
  const auto r = go({"trilaterate", fx("anchors.json")});
  ASSERT_EQ(r.exit_code, 0) << r.report.dump();
  EXPECT_NEAR(r.report["results"]["estimate"][0].get<double>(), 0.6, 1e-10);
  EXPECT_NEAR(r.report["results"]["estimate"][1].get<double>(), 0.8, 1e-10);
  EXPECT_TRUE(r.report["results"]["unique"].get<bool>());
  // --dists overrides the file
  const auto o = go({"trilaterate", fx("anchors.json"), "--dists", "1.4142135623730951,1,1"});
  ASSERT_EQ(o.exit_code, 0);
  EXPECT_NEAR(o.report["results"]["estimate"][0].get<double>(), 1.0, 1e-10);
  EXPECT_NEAR(o.report["results"]["estimate"][1].get<double>(), 1.0, 1e-10);
}

TEST(Cli, ExtendFlipAndMismatch) {
  const auto ok = go({"extend", fx("triangle.json"), fx("triangle_swapped.json")});
  ASSERT_EQ(ok.exit_code, 0) << ok.report.dump();
  const auto& q = ok.report["results"]["Q"];
  EXPECT_NEAR(q[0][1].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(q[1][0].get<double>(), 1.0, 1e-12);
  for (const char* k : {"Q", "pre_translation", "post_translation", "max_defect"})
    EXPECT_TRUE(ok.report["results"].contains(k)) << k;

  const auto viaPairing = go({"extend", fx("triangle.json"), fx("triangle.json"), "--pairing", "0,2,1"});
  ASSERT_EQ(viaPairing.exit_code, 0);
  EXPECT_EQ(viaPairing.report["results"]["Q"], q);

  const auto bad = go({"extend", fx("triangle.json"), fx("triangle_bent.json")});
  EXPECT_EQ(bad.exit_code, 2);
  EXPECT_EQ(bad.report["error"]["name"], "NotAnIsometry");
}

TEST(Cli, ExtendComplexExample) {
  const auto r = go({"extend", fx("complex_source.json"), fx("complex_target.json")});
  ASSERT_EQ(r.exit_code, 0) << r.report.dump();
  EXPECT_GE(r.report["results"]["complex_linearity"]["commutator"].get<double>(), 1.0 - 1e-12);
  EXPECT_FALSE(r.report["results"]["complex_linearity"]["complex_linear"].get<bool>());
}

TEST(Cli, LocusFlipIsoscelesStrict) {
  const auto loc = go({"locus", fx("l1_plane.json"), "--f", "1,0", "--g", "0,1", "--count", "3"});
  ASSERT_EQ(loc.exit_code, 0) << loc.report.dump();
  EXPECT_EQ(loc.report["results"]["points"].size(), 3u);

  const auto flip = go({"certify-flip", fx("l1_plane.json"), "--gamma", "2"});
  ASSERT_EQ(flip.exit_code, 0);
  EXPECT_TRUE(flip.report["results"]["found"].get<bool>());
  EXPECT_NEAR(flip.report["results"]["certificate"]["residual"].get<double>(), 1.0, 1e-12);
  const auto none = go({"certify-flip", fx("l2_space.json")});
  EXPECT_FALSE(none.report["results"]["found"].get<bool>());

  const auto iso = go({"isosceles", fx("l1_plane.json"), "--n", "5"});
  ASSERT_EQ(iso.exit_code, 0) << iso.report.dump();
  EXPECT_EQ(iso.report["results"]["source"], "ip5-witness");
  EXPECT_EQ(iso.report["results"]["points"].size(), 5u);
  EXPECT_EQ(iso.report["results"]["pairing"], json({0, 2, 1, 3, 4}));

  const auto isoE = go({"isosceles", fx("l2_space.json"), "--n", "4"});
  ASSERT_EQ(isoE.exit_code, 0) << isoE.report.dump();
  EXPECT_EQ(isoE.report["results"]["source"], "basis");

  const auto sc = go({"strict-convexity", fx("linf_plane.json")});
  ASSERT_EQ(sc.exit_code, 0);
  EXPECT_TRUE(sc.report["results"]["found"].get<bool>());
}

TEST(Cli, ErrorsAndExitCodes) {
  const auto malformed = go({"classify", fx("malformed.json")});
  EXPECT_EQ(malformed.exit_code, 1);
  EXPECT_EQ(malformed.report["error"]["name"], "ParseError");
  EXPECT_NE(malformed.report["error"]["message"].get<std::string>().find("line 2"), std::string::npos);

  const auto missing = go({"classify", fx("does_not_exist.json")});
  EXPECT_EQ(missing.exit_code, 1);

  const auto badp = go({"classify", fx("bad_p.json")});
  EXPECT_EQ(badp.exit_code, 2);
  EXPECT_EQ(badp.report["error"]["name"], "InvalidSpace");

  const auto usage = go({"frobnicate"});
  EXPECT_EQ(usage.exit_code, 1);
  EXPECT_EQ(usage.report["error"]["name"], "UsageError");

  const auto notiso = go({"isosceles", fx("l1_plane.json"), "--f", "1,0", "--g", "0,2"});
  EXPECT_EQ(notiso.exit_code, 2);
  EXPECT_EQ(notiso.report["error"]["name"], "NotIsosceles");

  const auto gamma = go({"certify-flip", fx("l1_plane.json"), "--gamma", "-1"});
  EXPECT_EQ(gamma.exit_code, 2);
  EXPECT_EQ(gamma.report["error"]["name"], "InvalidParameters");
}

TEST(Cli, ConfigPrecedence) {
  const auto fromFile = go({"classify", fx("l1_plane.json"), "--config", fx("run_config.json")});
  ASSERT_EQ(fromFile.exit_code, 0);
  EXPECT_EQ(fromFile.report["config"]["seed"], 5);
  EXPECT_EQ(fromFile.report["config"]["budget"], 300);
  EXPECT_EQ(fromFile.report["config"]["tolerances"]["violation_threshold"], 1e-5);
  EXPECT_EQ(fromFile.report["config"]["tolerances"]["residual_tol"], 1e-9);

  const auto flags = go({"--seed", "8", "classify", fx("l1_plane.json"), "--config", fx("run_config.json"),
                         "--budget", "200", "--tol-violation", "1e-4"});
  ASSERT_EQ(flags.exit_code, 0);
  EXPECT_EQ(flags.report["config"]["seed"], 8);
  EXPECT_EQ(flags.report["config"]["budget"], 200);
  EXPECT_EQ(flags.report["config"]["tolerances"]["violation_threshold"], 1e-4);
}

TEST(Cli, OutputFile) {
  const auto path = std::filesystem::temp_directory_path() / "ipspace_cli_out.json";
  std::filesystem::remove(path);
  std::vector<std::string> args{"ipspace", "cm", fx("equilateral.json"), "--out", path.string()};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  EXPECT_EQ(ipspace::cli::main(static_cast<int>(argv.size()), argv.data()), 0);
  std::ifstream in(path);
  ASSERT_TRUE(in.good());
  const json j = json::parse(in);
  EXPECT_EQ(j["command"], "cm");
  EXPECT_NEAR(j["results"]["det"].get<double>(), -3.0, 1e-9);
  std::filesystem::remove(path);
}

TEST(Cli, ResultsAreReproducible) {
  const std::vector<std::vector<std::string>> runs{
      {"classify", fx("l1_plane.json"), "--budget", "300", "--seed", "4"},
      {"extend", fx("triangle.json"), fx("triangle_swapped.json")},
      {"trilaterate", fx("anchors.json")},
      {"cm", fx("equilateral.json")},
      {"locus", fx("l1_plane.json"), "--f", "1,0", "--g", "-0.5,0.5", "--count", "4", "--seed", "2"},
      {"certify-flip", fx("linf_plane.json"), "--seed", "6"},
      {"isosceles", fx("l1_plane.json"), "--n", "6", "--seed", "1"},
      {"strict-convexity", fx("l1_plane.json"), "--seed", "3"}};
  for (const auto& a : runs) {
    const auto x = go(a), y = go(a);
    EXPECT_EQ(x.exit_code, 0) << a[0];
    EXPECT_EQ(x.report["results"].dump(), y.report["results"].dump()) << a[0];
  }
}
