#include <gtest/gtest.h>

#include "jetflat/cli.hpp"

using namespace jetflat;
using namespace jetflat::cli;

namespace {

Document doc(const char* text) { return Document::parse(text); }

}  // namespace

TEST(Document, ParsesKeyValueLines) {
  const Document d = doc("# comment\n\n f11 = z1^2 \nf12=0\nf22 = x1 = 2\n");
  EXPECT_EQ(d.require("f11"), "z1^2");
  EXPECT_EQ(d.require("f12"), "0");
  EXPECT_EQ(d.require("f22"), "x1 = 2");
  EXPECT_FALSE(d.get("h").has_value());
  EXPECT_THROW(d.require("h"), InputError);
}

TEST(Document, Errors) {
  EXPECT_THROW(doc("f11 0\n"), InputError);
  EXPECT_THROW(doc("f11 = 0\nf11 = 1\n"), InputError);
  EXPECT_THROW(doc("f11 =\n"), InputError);
  EXPECT_THROW(doc("f11 = 0\nf12 = 0\nf22 = 0\ng = 1\n").restrict_keys({"f11", "f12", "f22"}), InputError);
  EXPECT_THROW(Document::load("/nonexistent/input.txt"), InputError);
}

TEST(Check, Examples) {
  const Outcome flat = run_check(doc("f11 = 0\nf12 = 0\nf22 = 0"));
  EXPECT_EQ(flat.exit_code, kFlat);
  EXPECT_EQ(flat.report["verdict"], "Flat");
  EXPECT_EQ(flat.report["curvatures"].size(), 27u);
  EXPECT_EQ(flat.report["corollary37"]["agrees"], true);

  const Outcome sq = run_check(doc("f11 = z1^2\nf12 = 0\nf22 = 0"));
  EXPECT_EQ(sq.exit_code, kNotFlat);
  EXPECT_EQ(sq.report["witnesses"], Json::array({"S5"}));
  EXPECT_EQ(sq.report["curvatures"][17]["name"], "S5");
  EXPECT_EQ(sq.report["curvatures"][17]["base"], "-2");
  EXPECT_TRUE(sq.report["corollary37"].is_null());

  const Outcome ni = run_check(doc("f11 = y\nf12 = 0\nf22 = 0"));
  EXPECT_EQ(ni.exit_code, kNotIntegrable);
  EXPECT_EQ(ni.report["A"], "z2");
  EXPECT_NE(ni.text.find("A = z2"), std::string::npos);
  EXPECT_EQ(ni.report["corollary37"]["verdict"], "NotIntegrable");
}

TEST(Check, ParseErrorsNameTheKey) {
  try {
    run_check(doc("f11 = z1^^2\nf12 = 0\nf22 = 0"));
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("f11"), std::string::npos);
  }
  EXPECT_THROW(run_check(doc("f11 = 0\nf12 = 0")), InputError);
}

TEST(Check, JsonRoundTripsAndIsDeterministic) {
  const Outcome a = run_check(doc("f11 = z1^2*x2\nf12 = 0\nf22 = z2/x1"));
  const Outcome b = run_check(doc("f11 = z1^2*x2\nf12 = 0\nf22 = z2/x1"));
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(Json::parse(a.report.dump()), a.report);
}

TEST(Dual, Examples) {
  const Outcome flat = run_dual(doc("h = X1*x1 + X2*x2 + Y"));
  EXPECT_EQ(flat.exit_code, kFlat);
  EXPECT_EQ(flat.report["F11"], "0");
  EXPECT_EQ(flat.report["dual_check"]["verdict"], "Flat");

  const Outcome open = run_dual(doc("h = Y^2 + X1*x1 + X2*x2"));
  EXPECT_TRUE(open.report["open"].get<bool>());
  EXPECT_EQ(open.exit_code, kInputError);

  const Outcome closed = run_dual(doc("h = Y^2 + X1*x1 + X2*x2\ninverse.x1 = -2*Y*Z1\ninverse.x2 = -2*Y*Z2"));
  EXPECT_FALSE(closed.report["open"].get<bool>());
  EXPECT_EQ(closed.report["dual_check"]["system"]["f11"], "-z1^2/y");
  EXPECT_THROW(run_dual(doc("h = Y\ninverse.x1 = Z1")), InputError);
}

TEST(VerifyStructure, ExitCodes) {
  const Outcome ok = run_verify_structure(doc("f11 = z1^2\nf12 = 0\nf22 = 0"), curv::Level::reduced);
  EXPECT_EQ(ok.exit_code, 0);
  EXPECT_TRUE(ok.report["holds"].get<bool>());
  EXPECT_EQ(ok.report["rows"].size(), 10u);

  const Outcome fails = run_verify_structure(doc("f11 = y\nf12 = 0\nf22 = 0"), curv::Level::coframe_bundle);
  EXPECT_EQ(fails.exit_code, 1);
  EXPECT_FALSE(fails.report["holds"].get<bool>());

  const Outcome pre = run_verify_structure(doc("f11 = y\nf12 = 0\nf22 = 0"), curv::Level::reduced);
  EXPECT_EQ(pre.exit_code, kNotIntegrable);
  EXPECT_TRUE(pre.report["holds"].is_null());
}

TEST(Fibration, Examples) {
  const Outcome sl4 = run_fibration("sl4", 1);
  EXPECT_EQ(sl4.exit_code, 0);
  EXPECT_EQ(sl4.report["dimensions"][0]["dim"], 15);

  const Outcome compact = run_fibration("compact", 42);
  EXPECT_EQ(compact.exit_code, 0);
  std::vector<int> dims;
  for (const auto& d : compact.report["dimensions"]) dims.push_back(d["dim"]);
  EXPECT_EQ(dims, (std::vector<int>{9, 7, 7, 6}));
  for (const auto& d : compact.report["decompositions"]) EXPECT_EQ(d["failures"], 0);

  const Outcome scale = run_fibration("scale", 3);
  EXPECT_EQ(scale.exit_code, 0);
  dims.clear();
  for (const auto& d : scale.report["dimensions"]) dims.push_back(d["dim"]);
  EXPECT_EQ(dims, (std::vector<int>{8, 5, 7, 5}));
  std::vector<int> quotients;
  for (const auto& q : scale.report["quotients"]) quotients.push_back(q["dim"]);
  EXPECT_EQ(quotients, (std::vector<int>{3, 1, 3, 0, 2}));
  EXPECT_THROW(run_fibration("so3", 1), Error);
}

TEST(Fibration, SameSeedSameBytes) {
  EXPECT_EQ(run_fibration("compact", 9).report.dump(), run_fibration("compact", 9).report.dump());
  EXPECT_EQ(run_fibration("compact", 9).report["seed"], 9);
}
