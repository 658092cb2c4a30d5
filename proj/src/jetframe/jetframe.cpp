#include "jetflat/jetframe.hpp"

namespace jetflat::jet {

using ext::DiffForm;
using ext::VectorField;

const Chart& base_chart() {
  static const Chart chart({"x1", "x2", "y", "z1", "z2"});
  return chart;
}

namespace {

enum Coord : std::size_t { kX1, kX2, kY, kZ1, kZ2 };

RatFunc var(Coord c) { return RatFunc::variable(base_chart(), base_chart().name(c)); }
RatFunc constant(long v) { return RatFunc(base_chart(), v); }

void require_base(const RatFunc& f, const char* what) {
  if (!(f.chart() == base_chart())) {
    throw ChartMismatch(std::string(what) + " must be over the chart (x1, x2, y, z1, z2)");
  }
}

}  // namespace

PDESystem::PDESystem(RatFunc a, RatFunc b, RatFunc c) : f11(std::move(a)), f12(std::move(b)), f22(std::move(c)) {
  require_base(f11, "f11");
  require_base(f12, "f12");
  require_base(f22, "f22");
}

PDESystem::PDESystem() : PDESystem(constant(0), constant(0), constant(0)) {}

PDESystem PDESystem::parse(std::string_view a, std::string_view b, std::string_view c) {
  return PDESystem(sym::parse(a, base_chart()), sym::parse(b, base_chart()), sym::parse(c, base_chart()));
}

const RatFunc& PDESystem::f(int i, int j) const {
  if (i == 1 && j == 1) return f11;
  if (i == 2 && j == 2) return f22;
  if ((i == 1 && j == 2) || (i == 2 && j == 1)) return f12;
  throw Error("f_ij index out of range");
}

std::string frame_label(Frame f) {
  switch (f) {
    case Frame::theta0: return "θ0";
    case Frame::theta1: return "θ1";
    case Frame::theta2: return "θ2";
    case Frame::omega1: return "ω1";
    case Frame::omega2: return "ω2";
  }
  return "?";
}

std::array<DiffForm, 5> coframe(const PDESystem& sys) {
  const Chart& ch = base_chart();
  const RatFunc zero = constant(0), one = constant(1);
  return {
      DiffForm::one_form(ch, {-var(kZ1), -var(kZ2), one, zero, zero}),
      DiffForm::one_form(ch, {-sys.f11, -sys.f12, zero, one, zero}),
      DiffForm::one_form(ch, {-sys.f12, -sys.f22, zero, zero, one}),
      DiffForm::one_form(ch, {one, zero, zero, zero, zero}),
      DiffForm::one_form(ch, {zero, one, zero, zero, zero}),
  };
}

std::array<VectorField, 5> dual_frame(const PDESystem& sys) {
  const Chart& ch = base_chart();
  const RatFunc zero = constant(0), one = constant(1);
  return {
      VectorField(ch, {zero, zero, one, zero, zero}),
      VectorField(ch, {zero, zero, zero, one, zero}),
      VectorField(ch, {zero, zero, zero, zero, one}),
      VectorField(ch, {one, zero, var(kZ1), sys.f11, sys.f12}),
      VectorField(ch, {zero, one, var(kZ2), sys.f12, sys.f22}),
  };
}

RatFunc frame_derive(const PDESystem& sys, const RatFunc& f, Frame direction) {
  require_base(f, "frame derivative argument");
  const auto D = [&](Coord c) { return sym::derive(f, c); };
  switch (direction) {
    case Frame::theta0: return D(kY);
    case Frame::theta1: return D(kZ1);
    case Frame::theta2: return D(kZ2);
    case Frame::omega1: return D(kX1) + var(kZ1) * D(kY) + sys.f11 * D(kZ1) + sys.f12 * D(kZ2);
    case Frame::omega2: return D(kX2) + var(kZ2) * D(kY) + sys.f12 * D(kZ1) + sys.f22 * D(kZ2);
  }
  throw Error("unknown frame direction");
}

RatFunc frame_derive(const PDESystem& sys, const RatFunc& f, std::span<const Frame> path) {
  RatFunc out = f;
  for (Frame dir : path) out = frame_derive(sys, out, dir);
  return out;
}

Integrability integrability(const PDESystem& sys) {
  const auto D = [](const RatFunc& f, Coord c) { return sym::derive(f, c); };
  const RatFunc z1 = var(kZ1), z2 = var(kZ2);
  const RatFunc &f11 = sys.f11, &f12 = sys.f12, &f22 = sys.f22;
  RatFunc A = D(f11, kX2) - D(f12, kX1) + D(f11, kY) * z2 + D(f11, kZ1) * f12 + D(f11, kZ2) * f22 -
              D(f12, kY) * z1 - D(f12, kZ1) * f11 - D(f12, kZ2) * f12;
  RatFunc B = D(f12, kX2) - D(f22, kX1) + D(f12, kY) * z2 + D(f12, kZ1) * f12 + D(f12, kZ2) * f22 -
              D(f22, kY) * z1 - D(f22, kZ1) * f11 - D(f22, kZ2) * f12;
  return {A, B};
}

ScaleMap::ScaleMap(RatFunc a, RatFunc b, RatFunc c) : X1(std::move(a)), X2(std::move(b)), Y(std::move(c)) {
  require_base(X1, "X1");
  require_base(X2, "X2");
  require_base(Y, "Y");
  const auto only = [](const RatFunc& f, std::initializer_list<const char*> allowed, const char* what) {
    for (const auto& n : base_chart().names()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || n == a;
      if (!ok && f.depends_on(n)) throw Error(std::string(what) + " must not depend on " + n);
    }
  };
  only(X1, {"x1"}, "X1");
  only(X2, {"x2"}, "X2");
  only(Y, {"x1", "x2", "y"}, "Y");
  if (sym::derive(X1, kX1).is_zero() || sym::derive(X2, kX2).is_zero() || sym::derive(Y, kY).is_zero()) {
    throw Error("degenerate scale map: a Jacobian factor vanishes identically");
  }
}

ContactLift contact_lift_verify(const ScaleMap& map) {
  const RatFunc Yy = sym::derive(map.Y, kY);
  const RatFunc Z1 = (sym::derive(map.Y, kX1) + Yy * var(kZ1)) / sym::derive(map.X1, kX1);
  const RatFunc Z2 = (sym::derive(map.Y, kX2) + Yy * var(kZ2)) / sym::derive(map.X2, kX2);
  sym::Bindings phi{{"x1", map.X1}, {"x2", map.X2}, {"y", map.Y}, {"z1", Z1}, {"z2", Z2}};
  const DiffForm theta0 = coframe(PDESystem())[0];
  const DiffForm pulled = ext::pullback(theta0, phi, base_chart());
  return {Z1, Z2, Yy, pulled == Yy * theta0};
}

PDESystem pull_back_system(const PDESystem& target, const ScaleMap& map) {
  const ContactLift lift = contact_lift_verify(map);
  sym::Bindings phi{{"x1", map.X1}, {"x2", map.X2}, {"y", map.Y}, {"z1", lift.Z1}, {"z2", lift.Z2}};
  const std::array<RatFunc, 2> Z{lift.Z1, lift.Z2};
  const std::array<RatFunc, 2> dX{sym::derive(map.X1, kX1), sym::derive(map.X2, kX2)};
  const std::array<RatFunc, 2> z{var(kZ1), var(kZ2)};
  // Along a solution, D_j Z_i = F_ij(φ̂) (X_j)' and ∂Z_i/∂z_k = δ_ik Y_y/(X_i)'.
  const auto entry = [&](int i, int j) {
    RatFunc F = sym::substitute(target.f(i + 1, j + 1), phi);
    RatFunc rest = sym::derive(Z[i], static_cast<std::size_t>(j == 0 ? kX1 : kX2)) + z[j] * sym::derive(Z[i], kY);
    return dX[i] / lift.factor * (F * dX[j] - rest);
  };
  return PDESystem(entry(0, 0), entry(0, 1), entry(1, 1));
}

}  // namespace jetflat::jet
