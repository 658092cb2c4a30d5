#include <gtest/gtest.h>

#include "jetflat/exterior.hpp"
#include "jetflat/jetframe.hpp"
#include "jetflat/testkit/generators.hpp"

using namespace jetflat;
using namespace jetflat::ext;
using sym::RatFunc;

namespace {

const sym::Chart& J1() { return jet::base_chart(); }
RatFunc P(const char* s) { return sym::parse(s, J1()); }
DiffForm dx(const char* n) { return DiffForm::differential(J1(), n); }

DiffForm random_one_form(testkit::Rng& rng) {
  std::vector<RatFunc> c;
  for (std::size_t i = 0; i < J1().size(); ++i) c.push_back(testkit::random_expression(rng, J1(), 2));
  return DiffForm::one_form(J1(), c);
}

}  // namespace

TEST(Wedge, Antisymmetry) {
  EXPECT_TRUE(wedge(dx("x1"), dx("x1")).is_zero());
  EXPECT_EQ(wedge(dx("x1"), dx("x2")), -wedge(dx("x2"), dx("x1")));
  EXPECT_EQ(wedge(P("x1*z1") * dx("x1") + P("y") * dx("x2"), dx("x2")), P("x1*z1") * wedge(dx("x1"), dx("x2")));
}

TEST(Wedge, ThreeFormSigns) {
  // dz1 ∧ dx1 ∧ dy = dx1 ∧ dy ∧ dz1 (cyclic permutation of three)
  EXPECT_EQ(wedge(wedge(dx("z1"), dx("x1")), dx("y")), wedge(wedge(dx("x1"), dx("y")), dx("z1")));
  EXPECT_EQ(wedge_sign(0b100, 0b011), 1);
  EXPECT_EQ(wedge_sign(0b010, 0b001), -1);
}

TEST(ExteriorDerivative, ContactForm) {
  const auto th = jet::coframe(jet::PDESystem());
  // d(dy - z1 dx1 - z2 dx2) = dx1∧dz1 + dx2∧dz2
  EXPECT_EQ(d(th[0]), wedge(dx("x1"), dx("z1")) + wedge(dx("x2"), dx("z2")));
  EXPECT_TRUE(d(P("7") * wedge(dx("x1"), dx("x2"))).is_zero());
}

TEST(ExteriorDerivative, SquareIsZero) {
  testkit::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    RatFunc f = testkit::random_polynomial(rng, J1(), J1().names(), 3);
    EXPECT_TRUE(d(d(DiffForm::function(f))).is_zero());
    EXPECT_TRUE(d(d(random_one_form(rng))).is_zero());
  }
}

TEST(ExteriorDerivative, GradedLeibniz) {
  testkit::Rng rng(4);
  for (int i = 0; i < 15; ++i) {
    DiffForm a = random_one_form(rng), b = random_one_form(rng);
    EXPECT_EQ(d(wedge(a, b)), wedge(d(a), b) - wedge(a, d(b)));
    DiffForm f = DiffForm::function(testkit::random_expression(rng, J1(), 3));
    EXPECT_EQ(d(wedge(f, a)), wedge(d(f), a) + wedge(f, d(a)));
  }
}

TEST(Interior, ContractsAgainstDualBasis) {
  const auto th = jet::coframe(jet::PDESystem::parse("z1^2", "x1", "y"));
  const auto duals = dual_basis({th.begin(), th.end()});
  const auto frame = jet::dual_frame(jet::PDESystem::parse("z1^2", "x1", "y"));
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(duals[i][j], frame[i][j]);
    }
  }
  DiffForm w = wedge(th[1], th[3]);
  auto comps = frame_components(w, {th.begin(), th.end()});
  ASSERT_EQ(comps.size(), 1u);
  EXPECT_EQ(comps.begin()->first, 0b01010u);
  EXPECT_EQ(comps.begin()->second, P("1"));
}

TEST(ReduceMod, Examples) {
  const jet::PDESystem flat;
  const auto th = jet::coframe(flat);
  const std::vector<DiffForm> ideal0{th[0]};
  EXPECT_TRUE(reduce_mod(wedge(th[0], dx("x1")), ideal0).is_zero());
  EXPECT_EQ(reduce_mod(wedge(dx("x1"), dx("x2")), ideal0), wedge(dx("x1"), dx("x2")));

  const auto sys = jet::PDESystem::parse("y", "0", "0");
  const auto th2 = jet::coframe(sys);
  const std::vector<DiffForm> ideal{th2[0], th2[1], th2[2]};
  DiffForm r = reduce_mod(d(th2[1]), ideal);
  // dθ1 ≡ A dx1∧dx2 with A = z2
  EXPECT_EQ(r, P("z2") * wedge(dx("x1"), dx("x2")));
  EXPECT_THROW(reduce_mod(r, {th2[0], th2[0]}), Error);
}

TEST(ReduceMod, EliminatesPivotsAndIsIdempotent) {
  testkit::Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    const auto sys = testkit::random_quadratic(rng);
    const auto th = jet::coframe(sys);
    const std::vector<DiffForm> ideal{th[0], th[1], th[2]};
    DiffForm w = wedge(random_one_form(rng), random_one_form(rng));
    DiffForm r = reduce_mod(w, ideal);
    for (const auto& [m, f] : r.terms()) EXPECT_EQ(m & 0b11100u, 0u);
    EXPECT_EQ(reduce_mod(r, ideal), r);
  }
}

// Frobenius equivalence: dθ_i ≡ 0 mod the θ's for all i iff A = B = 0.
TEST(ReduceMod, FrobeniusMatchesIntegrability) {
  testkit::Rng rng(12);
  int integrable = 0;
  for (int i = 0; i < 24; ++i) {
    const auto sys = (i % 2 == 0) ? testkit::integrable_quadratic(rng) : testkit::random_quadratic(rng);
    const auto th = jet::coframe(sys);
    const std::vector<DiffForm> ideal{th[0], th[1], th[2]};
    bool all_zero = true;
    for (int k = 0; k < 3; ++k) all_zero = all_zero && reduce_mod(d(th[k]), ideal).is_zero();
    const auto ab = jet::integrability(sys);
    EXPECT_EQ(all_zero, ab.integrable());
    // The residues are exactly A dx1∧dx2 and B dx1∧dx2.
    EXPECT_EQ(reduce_mod(d(th[1]), ideal), ab.A * wedge(dx("x1"), dx("x2")));
    EXPECT_EQ(reduce_mod(d(th[2]), ideal), ab.B * wedge(dx("x1"), dx("x2")));
    integrable += ab.integrable();
  }
  EXPECT_EQ(integrable, 12);
}

TEST(Printer, CoordinateAndFrameNotation) {
  const auto th = jet::coframe(jet::PDESystem());
  EXPECT_EQ(to_string(th[0]), "-z1*dx1 - z2*dx2 + dy");
  EXPECT_EQ(to_string(P("1/x1") * wedge(dx("x1"), dx("z2"))), "(1/x1)*dx1∧dz2");
  std::vector<std::string> labels{"θ0", "θ1", "θ2", "ω1", "ω2"};
  EXPECT_EQ(to_string(d(th[0]), {th.begin(), th.end()}, labels), "-θ1∧ω1 - θ2∧ω2");
  EXPECT_EQ(to_string(DiffForm(J1(), 2)), "0");
}

TEST(Pullback, ScalingMap) {
  sym::Bindings phi{{"x1", P("2*x1")}, {"x2", P("x2")}, {"y", P("y")}, {"z1", P("z1/2")}, {"z2", P("z2")}};
  const auto th = jet::coframe(jet::PDESystem());
  EXPECT_EQ(pullback(th[0], phi, J1()), th[0]);
  EXPECT_EQ(pullback(wedge(dx("x1"), dx("z1")), phi, J1()), wedge(dx("x1"), dx("z1")));
}
