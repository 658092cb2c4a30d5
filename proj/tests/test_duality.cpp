#include <gtest/gtest.h>

#include "jetflat/curvature.hpp"
#include "jetflat/duality.hpp"
#include "jetflat/jetframe.hpp"
#include "jetflat/testkit/generators.hpp"

using namespace jetflat;
using namespace jetflat::dual;
using sym::RatFunc;

namespace {

bool flat_triple(const DualPDE& d) { return !d.open && d.F11.is_zero() && d.F12.is_zero() && d.F22.is_zero(); }

}  // namespace

TEST(DualPDE, FlatFamilyIsSelfDual) {
  const DualPDE d = dual_pde(SolutionFamily::parse("X1*x1 + X2*x2 + Y"));
  EXPECT_TRUE(flat_triple(d));
  EXPECT_TRUE(d.F11.chart() == solution_chart());
}

TEST(DualPDE, Examples) {
  EXPECT_TRUE(flat_triple(dual_pde(SolutionFamily::parse("X1*x1^2 + X2*x2 + Y"))));
  EXPECT_TRUE(flat_triple(dual_pde(SolutionFamily::parse("Y"))));
  EXPECT_THROW(SolutionFamily::parse("X1*x1"), Error);
  EXPECT_THROW(SolutionFamily::parse("q + Y"), UnknownIdentifier);
}

TEST(DualPDE, ResidualXIsFlaggedOrEliminated) {
  // y = Y^2 + X1 x1 + X2 x2: Y_{X_i} = -x_i/(2Y), so x_i = -2 Y Z_i.
  const DualPDE open = dual_pde(SolutionFamily::parse("Y^2 + X1*x1 + X2*x2"));
  EXPECT_TRUE(open.open);
  EXPECT_TRUE(open.F11.chart() == dual_chart());
  EXPECT_EQ(open.F11, sym::parse("x1*Z1/(2*Y^2)", dual_chart()));

  const DualPDE closed = dual_pde(SolutionFamily::parse("Y^2 + X1*x1 + X2*x2", {{"-2*Y*Z1", "-2*Y*Z2"}}));
  EXPECT_FALSE(closed.open);
  EXPECT_EQ(closed.F11, sym::parse("-Z1^2/Y", solution_chart()));
  EXPECT_EQ(closed.F12, sym::parse("-Z1*Z2/Y", solution_chart()));
  EXPECT_EQ(closed.F22, sym::parse("-Z2^2/Y", solution_chart()));
  EXPECT_THROW(SolutionFamily::parse("Y^2 + X1*x1 + X2*x2", {{"2*Y*Z1", "-2*Y*Z2"}}), Error);
}

TEST(DualPDE, FlatteningFamilyGivesFlatTriple) {
  // sys = (z1/x1, 0, 0) is flattened by X1 = x1^2; its solutions are y = X1 x1^2 + X2 x2 + Y.
  EXPECT_EQ(curv::flatness(jet::PDESystem::parse("z1/x1", "0", "0")).verdict, curv::Verdict::Flat);
  EXPECT_TRUE(flat_triple(dual_pde(SolutionFamily::parse("X1*x1^2 + X2*x2 + Y"))));
}

TEST(DualPDE, InvolutionAtTheFlatPoint) {
  // Solutions of the dual flat equation: Y = y - x1 X1 - x2 X2. Exchanging the
  // roles of the two spaces gives the family h = Y - X1 x1 - X2 x2.
  const DualPDE back = dual_pde(SolutionFamily::parse("Y - X1*x1 - X2*x2", {{"Z1", "Z2"}}));
  EXPECT_TRUE(flat_triple(back));
}

TEST(Projections, Examples) {
  const auto [p1, p2] = flat_projections({0, 0, 0, 0, 0});
  EXPECT_EQ(p1, (Point3{0, 0, 0}));
  EXPECT_EQ(p2, (Point3{0, 0, 0}));
  const auto [q1, q2] = flat_projections({1, 2, 3, 4, 5});
  EXPECT_EQ(q1, (Point3{1, 2, 3}));
  EXPECT_EQ(q2, (Point3{4, 5, -11}));
  EXPECT_TRUE(incidence_identity());
}

TEST(Projections, IncidenceAndSurjectivityOnSamples) {
  testkit::Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    const auto v = testkit::random_point(rng, 5);
    const Point5 p{v[0], v[1], v[2], v[3], v[4]};
    const auto [pt, sol] = flat_projections(p);
    EXPECT_EQ(pt[2], sol[0] * pt[0] + sol[1] * pt[1] + sol[2]);
    // Explicit preimages of random targets.
    const Point3 target{v[0], v[1], v[2]};
    EXPECT_EQ(flat_projections(Point5{target[0], target[1], target[2], 0, 0}).first, target);
    EXPECT_EQ(flat_projections(fiber_of_solution(target[0], target[1], target[2]).point(0, 0)).second, target);
  }
}

TEST(Leaf, Examples) {
  const Leaf zero = fiber_of_solution(0, 0, 0);
  EXPECT_EQ(zero.point(3, 4), (Point5{3, 4, 0, 0, 0}));
  EXPECT_EQ(Leaf::dimension, 2);

  const Leaf leaf = fiber_of_solution(1, 1, 0);
  const auto param = leaf.parametrization();
  EXPECT_EQ(param[2], sym::parse("x1 + x2", jet::base_chart()));
  testkit::Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    const auto s = testkit::random_point(rng, 2);
    EXPECT_EQ(flat_projections(leaf.point(s[0], s[1])).second, (Point3{1, 1, 0}));
  }
  // The parametrization only uses the two leaf parameters.
  for (const auto& f : param) {
    EXPECT_FALSE(f.depends_on("y") || f.depends_on("z1") || f.depends_on("z2"));
  }
}
