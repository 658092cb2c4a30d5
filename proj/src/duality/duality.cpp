#include "jetflat/duality.hpp"

#include "jetflat/jetframe.hpp"

namespace jetflat::dual {

namespace {

RatFunc var(const Chart& chart, const char* name) { return RatFunc::variable(chart, name); }

RatFunc D(const RatFunc& f, const std::string& v) { return sym::derive(f, v); }

sym::Bindings solution_identity() {
  sym::Bindings map;
  for (const char* n : {"X1", "X2", "Y", "Z1", "Z2"}) map.emplace(n, var(solution_chart(), n));
  return map;
}

// Rewrites f over the solution chart by substituting x <- inverse.
RatFunc eliminate_x(const RatFunc& f, const Inverse& inv) {
  sym::Bindings map = solution_identity();
  map.emplace("x1", inv.x1);
  map.emplace("x2", inv.x2);
  return sym::substitute(f, map);
}

}  // namespace

const Chart& family_chart() {
  static const Chart chart({"x1", "x2", "X1", "X2", "Y"});
  return chart;
}

const Chart& solution_chart() {
  static const Chart chart({"X1", "X2", "Y", "Z1", "Z2"});
  return chart;
}

const Chart& dual_chart() {
  static const Chart chart({"x1", "x2", "X1", "X2", "Y", "Z1", "Z2"});
  return chart;
}

SolutionFamily::SolutionFamily(RatFunc h, std::optional<Inverse> inverse)
    : h_(std::move(h)), inverse_(std::move(inverse)) {
  if (!(h_.chart() == family_chart())) throw ChartMismatch("h must be over (x1, x2, X1, X2, Y)");
  const RatFunc hY = D(h_, "Y");
  if (hY.is_zero()) throw Error("h_Y vanishes identically");
  if (!inverse_) return;
  if (!(inverse_->x1.chart() == solution_chart()) || !(inverse_->x2.chart() == solution_chart())) {
    throw ChartMismatch("the inverse must be over (X1, X2, Y, Z1, Z2)");
  }
  const RatFunc lifted_hY = sym::embed(hY, dual_chart());
  for (const std::string i : {"1", "2"}) {
    const RatFunc residual = var(dual_chart(), ("Z" + i).c_str()) + sym::embed(D(h_, "X" + i), dual_chart()) / lifted_hY;
    if (!eliminate_x(residual, *inverse_).is_zero()) {
      throw Error("inverse fails Z" + i + " + h_X" + i + "/h_Y = 0");
    }
  }
}

SolutionFamily SolutionFamily::parse(std::string_view h, std::optional<std::array<std::string_view, 2>> inverse) {
  std::optional<Inverse> inv;
  if (inverse) {
    inv = Inverse{sym::parse((*inverse)[0], solution_chart()), sym::parse((*inverse)[1], solution_chart())};
  }
  return SolutionFamily(sym::parse(h, family_chart()), std::move(inv));
}

DualPDE dual_pde(const SolutionFamily& family) {
  const RatFunc h = sym::embed(family.h(), dual_chart());
  const RatFunc hY = D(h, "Y"), hYY = D(hY, "Y");
  const auto F = [&](int i, int j) {
    const std::string Xi = "X" + std::to_string(i), Xj = "X" + std::to_string(j), Zj = "Z" + std::to_string(j);
    const RatFunc hXi = D(h, Xi);
    const RatFunc num =
        hXi * D(hY, Xj) - hY * D(hXi, Xj) + var(dual_chart(), Zj.c_str()) * (hXi * hYY - hY * D(hXi, "Y"));
    return num / (hY * hY);
  };
  const RatFunc F11 = F(1, 1), F12 = F(1, 2), F22 = F(2, 2);
  const auto has_x = [](const RatFunc& f) { return f.depends_on("x1") || f.depends_on("x2"); };
  if (has_x(F11) || has_x(F12) || has_x(F22)) {
    if (!family.inverse()) return {F11, F12, F22, true};
    const Inverse& inv = *family.inverse();
    return {eliminate_x(F11, inv), eliminate_x(F12, inv), eliminate_x(F22, inv), false};
  }
  const sym::Bindings id = solution_identity();
  return {sym::substitute(F11, id), sym::substitute(F12, id), sym::substitute(F22, id), false};
}

std::pair<Point3, Point3> flat_projections(const Point5& p) {
  const auto& [x1, x2, y, z1, z2] = p;
  return {Point3{x1, x2, y}, Point3{z1, z2, y - z1 * x1 - z2 * x2}};
}

bool incidence_identity() {
  const Chart& ch = jet::base_chart();
  const RatFunc x1 = var(ch, "x1"), x2 = var(ch, "x2"), y = var(ch, "y"), z1 = var(ch, "z1"), z2 = var(ch, "z2");
  const RatFunc a = z1, b = z2, c = y - z1 * x1 - z2 * x2;
  return a * x1 + b * x2 + c == y;
}

Point5 Leaf::point(const mpq_class& s1, const mpq_class& s2) const { return {s1, s2, a * s1 + b * s2 + c, a, b}; }

std::array<RatFunc, 5> Leaf::parametrization() const {
  const Chart& ch = jet::base_chart();
  const RatFunc x1 = var(ch, "x1"), x2 = var(ch, "x2");
  return {x1, x2, RatFunc(ch, a) * x1 + RatFunc(ch, b) * x2 + RatFunc(ch, c), RatFunc(ch, a), RatFunc(ch, b)};
}

Leaf fiber_of_solution(const mpq_class& a, const mpq_class& b, const mpq_class& c) { return {a, b, c}; }

}  // namespace jetflat::dual
