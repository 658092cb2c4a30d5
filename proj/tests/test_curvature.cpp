#include <gtest/gtest.h>

#include "jetflat/curvature.hpp"
#include "jetflat/testkit/generators.hpp"
#include "jetflat/testkit/oracle.hpp"

using namespace jetflat;
using namespace jetflat::curv;
using jet::PDESystem;
using sym::RatFunc;

namespace {

RatFunc Bn(const char* s) { return sym::parse(s, bundle_chart()); }
RatFunc Rd(const char* s) { return sym::parse(s, reduced_chart()); }
RatFunc Base(const char* s) { return sym::parse(s, jet::base_chart()); }
PDESystem sys(const char* a, const char* b, const char* c) { return PDESystem::parse(a, b, c); }

bool all_hold(const PDESystem& s, Level level) { return verify_structure_eq(s, level).holds(); }

}  // namespace

TEST(FiberMonomial, EliminatesKAndPrints) {
  const FiberMonomial m = FiberMonomial::make(-1, 0, 0, -1, -1);  // -1/(hk) = -g/(c h^2)
  EXPECT_EQ(to_string(m), "-g/(c*h^2)");
  EXPECT_EQ(m.on(reduced_chart()), Rd("-g/(c*h^2)"));
  EXPECT_EQ(to_string(FiberMonomial::make(-1, 1, -1, -1)), "-c/(g*h)");
  EXPECT_EQ(to_string(FiberMonomial::make(1, -1, 0, -2)), "1/(c*h^2)");
  EXPECT_EQ(to_string(FiberMonomial::make(2, 0, 0, 0)), "2");
  EXPECT_EQ(to_string(FiberMonomial::make(1, 0, 0, -1)), "1/h");
}

TEST(Torsions, Examples) {
  const auto T0 = torsions_T(PDESystem());
  EXPECT_EQ(T0[0], Bn("-b/(c*h)"));
  EXPECT_EQ(T0[2], Bn("b^2/(c*h)^2"));
  EXPECT_EQ(torsions_T(sys("x1*z1^2", "y", "z2"))[0], Bn("-b/(c*h)"));
  sym::Bindings b0 = sym::identity_bindings(bundle_chart(), bundle_chart());
  b0.insert_or_assign("b", Bn("0"));
  EXPECT_TRUE(sym::substitute(T0[4], b0).is_zero());

  const auto L0 = torsions_L(PDESystem());
  EXPECT_EQ(L0[0], Bn("-2*b/(c*h)"));
  const auto L = torsions_L(sys("z2^2*x1", "0", "0"));
  EXPECT_EQ(L[2], Bn("-c*2*z2*x1/(g*h)"));
}

TEST(Torsions, ReductionSolvesForBAndE) {
  const Reduction r = solve_reduction(sys("0", "z1*z2", "0"));
  EXPECT_EQ(r.b, Rd("-c*z1"));
  EXPECT_EQ(r.e, Rd("-g*z2"));
  const Reduction flat = solve_reduction(PDESystem());
  EXPECT_TRUE(flat.b.is_zero());
  EXPECT_TRUE(flat.e.is_zero());
}

TEST(Curvatures, Examples) {
  const Curvatures flat = curvatures(PDESystem());
  for (const auto& m : flat.M) EXPECT_TRUE(m.is_zero());
  for (const auto& s : flat.S) EXPECT_TRUE(s.is_zero());

  EXPECT_EQ(curvatures(sys("z1^2", "0", "0"))["S5"].base, Base("-2"));
  const Curvatures k = curvatures(sys("z2^2", "0", "0"));
  EXPECT_EQ(k["M1"].base, Base("2*z2"));
  EXPECT_EQ(to_string(k["M1"].fiber), "-c/(g*h)");
  EXPECT_EQ(to_string(k["S1"].fiber), "1/(c*h^2)");
  EXPECT_THROW(curvatures(sys("y", "0", "0")), PreconditionError);
}

TEST(Curvatures, DerivativeTableReadsPathsLeftToRight) {
  const PDESystem s = sys("x2*z1^2", "z1*z2", "y");
  DerivativeTable table(s);
  const Factor f{Source::f11, {Dir::theta1, Dir::omega2}};
  const RatFunc expected = jet::frame_derive(s, jet::frame_derive(s, s.f11, jet::Frame::theta1), jet::Frame::omega2);
  EXPECT_EQ(table.get(f), expected);
  EXPECT_EQ(table.get({Source::z2, {}}), Base("z2"));
}

TEST(Flatness, KnownVerdicts) {
  EXPECT_EQ(flatness(PDESystem()).verdict, Verdict::Flat);

  const auto r = flatness(sys("z1^2", "0", "0"));
  EXPECT_EQ(r.verdict, Verdict::NotFlat);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_NE(std::find(r.witnesses.begin(), r.witnesses.end(), "S5"), r.witnesses.end());

  const auto f = flatness(sys("z1/x1", "0", "0"));
  EXPECT_EQ(f.verdict, Verdict::Flat);
  EXPECT_TRUE(f.witnesses.empty());

  const auto n = flatness(sys("y", "0", "0"));
  EXPECT_EQ(n.verdict, Verdict::NotIntegrable);
  EXPECT_EQ(n.A, Base("z2"));
  EXPECT_TRUE(n.M.empty());

  EXPECT_EQ(flatness(sys("z1^3", "0", "0")).verdict, Verdict::NotFlat);
}

TEST(Flatness, ReportInvariants) {
  testkit::Rng rng(21);
  for (int i = 0; i < 12; ++i) {
    const PDESystem s = (i % 3 == 0) ? testkit::random_quadratic(rng) : testkit::integrable_quadratic(rng);
    const auto r = flatness(s);
    const bool integrable = r.A.is_zero() && r.B.is_zero();
    EXPECT_EQ(r.verdict == Verdict::NotIntegrable, !integrable);
    EXPECT_EQ(r.witnesses.empty(), r.verdict != Verdict::NotFlat);
    if (integrable) {
      EXPECT_EQ(r.M.size(), 13u);
      EXPECT_EQ(r.S.size(), 14u);
      for (const auto& d : r.diagnostics) {
        if (d.name.starts_with("M")) EXPECT_TRUE(d.agrees) << d.name << ": " << d.detail;
      }
    }
  }
}

TEST(Flatness, ScaleMapsPreserveFlatVerdict) {
  testkit::Rng rng(5);
  for (int i = 0; i < 8; ++i) {
    const PDESystem s = testkit::flat_by_scale_map(rng);
    EXPECT_EQ(flatness(s).verdict, Verdict::Flat) << sym::to_string(s.f11);
  }
}

TEST(Flatness, CubicSystemsAreNeverFlat) {
  testkit::Rng rng(31);
  for (int i = 0; i < 6; ++i) {
    const PDESystem s = testkit::integrable_cubic(rng);
    ASSERT_TRUE(jet::integrability(s).integrable());
    EXPECT_EQ(quadratic_obstruction(s), ZDegree::exceeds_quadratic);
    EXPECT_EQ(flatness(s).verdict, Verdict::NotFlat);
  }
}

TEST(CurvatureRelations, Examples) {
  EXPECT_TRUE(verify_prop35(PDESystem()).holds());
  EXPECT_TRUE(verify_prop35(sys("z1", "0", "z2")).holds());
  testkit::Rng rng(2);
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(verify_prop35(testkit::hessian_quartic(rng)).holds());
  EXPECT_THROW(verify_prop35(sys("y", "0", "0")), PreconditionError);
}

TEST(CurvatureRelations, PrintedS10SignFailsWhenS10IsNonzero) {
  testkit::Rng rng(17);
  int nonzero = 0;
  for (int i = 0; i < 10; ++i) {
    const PDESystem q = testkit::integrable_quadratic(rng);
    const auto check = verify_prop35(q);
    EXPECT_TRUE(check.holds());
    if (!curvatures(q)["S10"].is_zero()) {
      ++nonzero;
      EXPECT_FALSE(check.printed_s10_holds);
    } else {
      EXPECT_TRUE(check.printed_s10_holds);
    }
  }
  EXPECT_GT(nonzero, 0);
}

TEST(StructureEquations, Examples) {
  for (Level level : {Level::coframe_bundle, Level::g_structure, Level::reduced, Level::e_structure}) {
    EXPECT_TRUE(all_hold(PDESystem(), level)) << to_string(level);
    EXPECT_TRUE(all_hold(sys("z1", "0", "z2"), level)) << to_string(level);
  }
  testkit::Rng rng(4);
  EXPECT_TRUE(all_hold(testkit::hessian_quartic(rng), Level::g_structure));
  EXPECT_THROW(verify_structure_eq(sys("y", "0", "0"), Level::reduced), PreconditionError);
  EXPECT_THROW(verify_structure_eq(sys("y", "0", "0"), Level::e_structure), PreconditionError);
  EXPECT_EQ(level_from_string("10"), Level::g_structure);
  EXPECT_THROW(level_from_string("12"), Error);
}

TEST(StructureEquations, HoldOnIntegrableSystems) {
  testkit::Rng rng(9);
  for (int i = 0; i < 4; ++i) {
    const PDESystem s = testkit::integrable_quadratic(rng);
    for (Level level : {Level::coframe_bundle, Level::g_structure, Level::reduced, Level::e_structure}) {
      const auto check = verify_structure_eq(s, level);
      for (const auto& row : check.rows) {
        EXPECT_TRUE(row.residual.is_zero()) << to_string(level) << " " << row.name << ": "
                                            << ext::to_string(row.residual);
      }
    }
  }
}

// Without integrability the first two levels leave exactly c·A and g·B in
// the θ1 and θ2 rows.
TEST(StructureEquations, NonIntegrableResidualIsTheFrobeniusObstruction) {
  testkit::Rng rng(10);
  for (int i = 0; i < 3; ++i) {
    const PDESystem s = testkit::random_quadratic(rng);
    const auto ab = jet::integrability(s);
    ASSERT_FALSE(ab.integrable());
    const auto dx12 = ext::wedge(ext::DiffForm::differential(bundle_chart(), "x1"),
                                 ext::DiffForm::differential(bundle_chart(), "x2"));
    for (Level level : {Level::coframe_bundle, Level::g_structure}) {
      const auto check = verify_structure_eq(s, level);
      EXPECT_FALSE(check.holds());
      EXPECT_EQ(check.rows[1].residual, (Bn("c") * sym::embed(ab.A, bundle_chart())) * dx12);
      EXPECT_EQ(check.rows[2].residual, (Bn("g") * sym::embed(ab.B, bundle_chart())) * dx12);
      EXPECT_TRUE(check.rows[0].residual.is_zero());
      EXPECT_TRUE(check.rows[3].residual.is_zero());
      EXPECT_TRUE(check.rows[4].residual.is_zero());
    }
  }
}

TEST(StructureEquations, PrintedS1BreaksTheEStructure) {
  // A system where the printed S1 differs from the consistent one.
  testkit::Rng rng(3);
  int differing = 0;
  for (int i = 0; i < 10 && differing == 0; ++i) {
    const PDESystem s = testkit::integrable_quadratic(rng);
    DerivativeTable table(s);
    if (table.evaluate(printed_s1_recipe()) != table.evaluate(curvature_recipes()[13])) {
      ++differing;
      EXPECT_TRUE(verify_structure_eq(s, Level::e_structure).holds());
      const auto r = flatness(s);
      EXPECT_FALSE(r.diagnostics.back().agrees);
    }
  }
  EXPECT_GT(differing, 0);
}

TEST(ZFreeFastPath, Examples) {
  EXPECT_EQ(corollary37(Base("x2^2"), Base("2*x1*x2"), Base("x1^2")), Verdict::Flat);
  EXPECT_EQ(corollary37(Base("0"), Base("0"), Base("0")), Verdict::Flat);
  EXPECT_NE(corollary37(Base("y"), Base("0"), Base("0")), Verdict::Flat);
  EXPECT_THROW(corollary37(Base("z1"), Base("0"), Base("0")), Error);
  EXPECT_EQ(flatness(PDESystem(Base("x2^2"), Base("2*x1*x2"), Base("x1^2"))).verdict, Verdict::Flat);
}

TEST(ZFreeFastPath, AgreesWithFlatness) {
  testkit::Rng rng(44);
  int flat = 0;
  for (int i = 0; i < 20; ++i) {
    RatFunc P(jet::base_chart()), Q(jet::base_chart()), R(jet::base_chart());
    if (i % 2 == 0) {
      // Hessian of a cubic-ish potential: satisfies the conditions.
      const RatFunc F = testkit::random_polynomial(rng, jet::base_chart(), {"x1", "x2"}, 4);
      P = sym::derive(sym::derive(F, "x1"), "x1");
      Q = sym::derive(sym::derive(F, "x1"), "x2");
      R = sym::derive(sym::derive(F, "x2"), "x2");
    } else {
      P = testkit::random_polynomial(rng, jet::base_chart(), {"x1", "x2", "y"}, 2);
      Q = testkit::random_polynomial(rng, jet::base_chart(), {"x1", "x2", "y"}, 2);
      R = testkit::random_polynomial(rng, jet::base_chart(), {"x1", "x2", "y"}, 2);
    }
    const Verdict v = corollary37(P, Q, R);
    EXPECT_EQ(v, flatness(PDESystem(P, Q, R)).verdict);
    flat += v == Verdict::Flat;
  }
  EXPECT_EQ(flat, 10);
}

TEST(QuadraticObstruction, Examples) {
  EXPECT_EQ(quadratic_obstruction(PDESystem()), ZDegree::within_quadratic);
  EXPECT_EQ(quadratic_obstruction(sys("z1^3", "0", "0")), ZDegree::exceeds_quadratic);
  EXPECT_EQ(quadratic_obstruction(sys("z1*z2", "0", "0")), ZDegree::within_quadratic);
  EXPECT_EQ(quadratic_obstruction(sys("1/z1", "0", "0")), ZDegree::inapplicable);
  EXPECT_EQ(quadratic_obstruction(sys("z1^2/x1", "0", "0")), ZDegree::within_quadratic);
  EXPECT_EQ(curvatures(sys("z1^3", "0", "0"))["S5"].base, Base("-6*z1"));
}

TEST(NumericOracle, MatchesSymbolicBases) {
  testkit::Rng rng(7);
  const mpq_class step(1, 1000000);
  for (int i = 0; i < 3; ++i) {
    const PDESystem s = i == 0 ? sys("z1/x1", "0", "z2^2*x2") : testkit::integrable_quadratic(rng);
    DerivativeTable table(s);
    for (int p = 0; p < 2; ++p) {
      const auto point = testkit::random_point(rng, 5);
      for (const Recipe& r : curvature_recipes()) {
        const double exact = sym::eval(table.evaluate(r), point).get_d();
        const double fd = testkit::finite_difference_base(r, s, point, step).get_d();
        EXPECT_LT(testkit::relative_error(exact, fd), 1e-4) << r.name;
      }
    }
  }
}
