#include "jetflat/curvature.hpp"

namespace jetflat::curv {

using ext::DiffForm;
using ext::wedge;

namespace {

// Symbols and forms on one bundle chart.
class Bundle {
public:
  explicit Bundle(const Chart& chart) : chart_(chart) {}

  const Chart& chart() const { return chart_; }
  RatFunc var(const char* name) const { return RatFunc::variable(chart_, name); }
  RatFunc num(long v) const { return RatFunc(chart_, v); }
  RatFunc k() const { return var("c") * var("h") / var("g"); }
  RatFunc lift(const RatFunc& base) const { return sym::embed(base, chart_); }
  DiffForm dv(const char* name) const { return DiffForm::differential(chart_, name); }
  DiffForm dk() const { return ext::d(DiffForm::function(k())); }

  DiffForm lift(const DiffForm& base) const {
    std::vector<RatFunc> comps(chart_.size(), num(0));
    for (std::size_t i = 0; i < base.chart().size(); ++i) {
      comps[chart_.require(base.chart().name(i))] = lift(base.component(i));
    }
    return DiffForm::one_form(chart_, comps);
  }

  /// The coframe θ̲0, θ̲1, θ̲2 lifted to the bundle.
  std::array<DiffForm, 3> underlined(const PDESystem& sys) const {
    const auto th = jet::coframe(sys);
    return {lift(th[0]), lift(th[1]), lift(th[2])};
  }

private:
  const Chart& chart_;
};

DiffForm operator^(const DiffForm& a, const DiffForm& b) { return wedge(a, b); }

struct Partials {
  RatFunc Py, Pz1, Pz2, Qy, Qz1, Qz2, Ry, Rz1, Rz2;
};

Partials partials(const PDESystem& sys, const Bundle& B) {
  const auto D = [&](const RatFunc& f, const char* v) { return B.lift(sym::derive(f, v)); };
  return {D(sys.f11, "y"), D(sys.f11, "z1"), D(sys.f11, "z2"), D(sys.f12, "y"), D(sys.f12, "z1"),
          D(sys.f12, "z2"), D(sys.f22, "y"), D(sys.f22, "z1"), D(sys.f22, "z2")};
}

// Rewrites a function on the full bundle chart onto the reduced chart.
RatFunc to_reduced(const RatFunc& f) {
  sym::Bindings map;
  for (const auto& n : reduced_chart().names()) map.emplace(n, RatFunc::variable(reduced_chart(), n));
  return sym::substitute(f, map);
}

// Solves the linear equation L = 0 for the coordinate var.
RatFunc solve_linear(const RatFunc& L, const char* var) {
  const RatFunc slope = sym::derive(L, var);
  if (slope.is_zero() || slope.depends_on(var)) throw Error(std::string("equation is not linear in ") + var);
  sym::Bindings at_zero = sym::identity_bindings(L.chart(), L.chart());
  at_zero.insert_or_assign(var, RatFunc(L.chart(), 0));
  return -sym::substitute(L, at_zero) / slope;
}

void require_integrable(const PDESystem& sys, const char* what) {
  if (!jet::integrability(sys).integrable()) {
    throw PreconditionError(std::string(what) + " requires A = B = 0");
  }
}

StructureCheck coframe_bundle_level(const PDESystem& sys) {
  const Bundle B(bundle_chart());
  const auto T = torsions_T(sys);
  const RatFunc b = B.var("b"), c = B.var("c"), e = B.var("e"), g = B.var("g"), h = B.var("h"), k = B.k();
  const auto [th0_, th1_, th2_] = B.underlined(sys);
  const DiffForm th0 = (c * h) * th0_, th1 = b * th0_ + c * th1_, th2 = e * th0_ + g * th2_;
  const DiffForm om1 = h * B.dv("x1"), om2 = k * B.dv("x2");
  const DiffForm dc = B.dv("c"), dh = B.dv("h"), db = B.dv("b"), de = B.dv("e"), dg = B.dv("g");
  const RatFunc one = B.num(1);

  DiffForm r0 = ((one / c) * dc + (one / h) * dh) ^ th0;
  r0 += (T[0] * om1 ^ th0) + (T[1] * om2 ^ th0) - (th1 ^ om1) - (th2 ^ om2);
  DiffForm r1 = ((one / (c * h)) * db - (b / (c * c * h)) * dc) ^ th0;
  r1 += ((one / c) * dc ^ th1) + (th0 ^ (T[2] * om1 + T[3] * om2)) + (th1 ^ (T[4] * om1 + T[5] * om2)) +
        (th2 ^ (T[6] * om1 + T[7] * om2));
  DiffForm r2 = ((one / (c * h)) * de - (e / (c * g * h)) * dg) ^ th0;
  r2 += ((one / g) * dg ^ th2) + (th0 ^ (T[8] * om1 + T[9] * om2)) + (th1 ^ (T[10] * om1 + T[11] * om2)) +
        (th2 ^ (T[12] * om1 + T[13] * om2));
  const DiffForm r3 = (one / h) * dh ^ om1;
  const DiffForm r4 = (one / k) * B.dk() ^ om2;

  using ext::d;
  return {Level::coframe_bundle,
          {{"dθ0", d(th0) - r0}, {"dθ1", d(th1) - r1}, {"dθ2", d(th2) - r2}, {"dω1", d(om1) - r3},
           {"dω2", d(om2) - r4}}};
}

StructureCheck g_structure_level(const PDESystem& sys) {
  const Bundle B(bundle_chart());
  const auto T = torsions_T(sys);
  const auto L = torsions_L(sys);
  const RatFunc b = B.var("b"), c = B.var("c"), e = B.var("e"), g = B.var("g"), h = B.var("h"), k = B.k();
  const auto [th0_, th1_, th2_] = B.underlined(sys);
  const DiffForm th0 = (c * h) * th0_, th1 = b * th0_ + c * th1_, th2 = e * th0_ + g * th2_;
  const DiffForm om1 = h * B.dv("x1"), om2 = k * B.dv("x2");
  const DiffForm dc = B.dv("c"), dh = B.dv("h"), db = B.dv("b"), de = B.dv("e"), dg = B.dv("g");
  const RatFunc one = B.num(1);

  const DiffForm alpha = (one / c) * dc - (b / (c * h)) * om1 - (e / (c * h)) * om2;
  const DiffForm beta = (one / (c * h)) * db - (b / (c * c * h)) * dc - T[2] * om1 - T[3] * om2;
  const DiffForm eps = (one / (c * h)) * de - (e / (c * g * h)) * dg - T[8] * om1 - T[9] * om2;
  const DiffForm delta = (one / g) * dg - (b / (c * h)) * om1 - (e / (c * h)) * om2;
  const DiffForm gamma = (one / h) * dh, psi = (one / k) * B.dk();

  const DiffForm r0 = ((alpha + gamma) ^ th0) - (th1 ^ om1) - (th2 ^ om2);
  const DiffForm r1 = (beta ^ th0) + (alpha ^ th1) + L[0] * (th1 ^ om1) + L[1] * (th1 ^ om2) + L[2] * (th2 ^ om1) +
                      L[3] * (th2 ^ om2);
  const DiffForm r2 = (eps ^ th0) + (delta ^ th2) + L[1] * (th1 ^ om1) + L[4] * (th1 ^ om2) + L[3] * (th2 ^ om1) +
                      L[5] * (th2 ^ om2);

  using ext::d;
  return {Level::g_structure,
          {{"dθ0", d(th0) - r0},
           {"dθ1", d(th1) - r1},
           {"dθ2", d(th2) - r2},
           {"dω1", d(om1) - (gamma ^ om1)},
           {"dω2", d(om2) - (psi ^ om2)},
           {"α+γ-δ-ψ", alpha + gamma - delta - psi}}};
}

// Tautological and connection forms on the reduced bundle.
struct Reduced {
  Bundle B{reduced_chart()};
  DiffForm t0, t1, t2, o1, o2, al, de, ga, ps;
  // Coordinate-form M1..M13 as functions on the reduced bundle.
  std::vector<RatFunc> M;
  DiffForm ah, gh, dh, ph;

  explicit Reduced(const PDESystem& sys)
      : t0(B.chart(), 1), t1(B.chart(), 1), t2(B.chart(), 1), o1(B.chart(), 1), o2(B.chart(), 1),
        al(B.chart(), 1), de(B.chart(), 1), ga(B.chart(), 1), ps(B.chart(), 1), ah(B.chart(), 1),
        gh(B.chart(), 1), dh(B.chart(), 1), ph(B.chart(), 1) {
    const RatFunc c = B.var("c"), g = B.var("g"), h = B.var("h"), k = B.k(), one = B.num(1);
    const Reduction red = solve_reduction(sys);
    const auto [th0_, th1_, th2_] = B.underlined(sys);
    t0 = (c * h) * th0_;
    t1 = red.b * th0_ + c * th1_;
    t2 = red.e * th0_ + g * th2_;
    o1 = h * B.dv("x1");
    o2 = k * B.dv("x2");
    al = (one / c) * B.dv("c");
    de = (one / g) * B.dv("g");
    ga = (one / h) * B.dv("h");
    ps = (one / k) * B.dk();
    DerivativeTable table(sys);
    for (const Recipe& r : coordinate_m_recipes()) M.push_back(table.scalar(r).on(B.chart()));
    ah = al - M[1] * t0 + M[9] * o1 + M[10] * o2;
    gh = ga + (M[11] - M[9]) * o1;
    dh = de - M[1] * t0 + M[11] * o1 + M[12] * o2;
    ph = ps + (M[10] - M[12]) * o2;
  }
  const RatFunc& m(int i) const { return M[static_cast<std::size_t>(i - 1)]; }
};

StructureCheck reduced_level(const PDESystem& sys) {
  require_integrable(sys, "the reduced structure equation");
  const Reduced r(sys);
  const auto& [B, t0, t1, t2, o1, o2, al, de, ga, ps, M, ah, gh, dh, ph] = r;
  const auto m = [&](int i) { return r.m(i); };
  using ext::d;
  const DiffForm dt0 = d(t0), dt1 = d(t1), dt2 = d(t2), do1 = d(o1), do2 = d(o2);

  const DiffForm p0 = ((al + ga) ^ t0) + m(12) * (o1 ^ t0) + m(11) * (o2 ^ t0) - (t1 ^ o1) - (t2 ^ o2);
  const DiffForm p1 = (al ^ t1) + m(1) * (t2 ^ o1) + m(2) * (t1 ^ t0) + m(3) * (t2 ^ t0) + m(4) * (o1 ^ t0) +
                      m(5) * (o2 ^ t0) + m(10) * (o1 ^ t1) + m(11) * (o2 ^ t1);
  const DiffForm p2 = (de ^ t2) + m(6) * (t1 ^ o2) + m(7) * (t1 ^ t0) + m(2) * (t2 ^ t0) + m(8) * (o1 ^ t0) +
                      m(9) * (o2 ^ t0) + m(12) * (o1 ^ t2) + m(13) * (o2 ^ t2);

  const DiffForm s0 = ((ah + gh) ^ t0) + (o1 ^ t1) + (o2 ^ t2);
  const DiffForm s1 = (ah ^ t1) + m(1) * (t2 ^ o1) + m(3) * (t2 ^ t0) + m(4) * (o1 ^ t0) + m(5) * (o2 ^ t0);
  const DiffForm s2 = (dh ^ t2) + m(6) * (t1 ^ o2) + m(7) * (t1 ^ t0) + m(8) * (o1 ^ t0) + m(9) * (o2 ^ t0);

  return {Level::reduced,
          {{"dθ0 before absorption", dt0 - p0},
           {"dθ1 before absorption", dt1 - p1},
           {"dθ2 before absorption", dt2 - p2},
           {"dω1 before absorption", do1 - (ga ^ o1)},
           {"dω2 before absorption", do2 - (ps ^ o2)},
           {"dθ0", dt0 - s0},
           {"dθ1", dt1 - s1},
           {"dθ2", dt2 - s2},
           {"dω1", do1 - (gh ^ o1)},
           {"dω2", do2 - (ph ^ o2)}}};
}

StructureCheck e_structure_level(const PDESystem& sys) {
  require_integrable(sys, "the {e}-structure equation");
  const Reduced r(sys);
  const auto& [B, t0, t1, t2, o1, o2, al, de, ga, ps, Mc, ah, gh, dh, ph] = r;
  const Curvatures K = curvatures(sys);
  const auto M = [&](int i) { return K.M[static_cast<std::size_t>(i - 1)].on(B.chart()); };
  const auto S = [&](int i) { return K.S[static_cast<std::size_t>(i - 1)].on(B.chart()); };
  using ext::d;

  const DiffForm s0 = ((ah + gh) ^ t0) + (o1 ^ t1) + (o2 ^ t2);
  const DiffForm s1 = (ah ^ t1) + M(1) * (t2 ^ o1) + M(3) * (t2 ^ t0) + M(4) * (o1 ^ t0) + M(5) * (o2 ^ t0);
  const DiffForm s2 =
      ((ah + gh - ph) ^ t2) + M(6) * (t1 ^ o2) + M(7) * (t1 ^ t0) + M(8) * (o1 ^ t0) + M(9) * (o2 ^ t0);
  const DiffForm sa = S(1) * (o1 ^ t0) + S(2) * (o2 ^ t0) + S(3) * (t1 ^ t0) + S(4) * (t2 ^ t0) +
                      S(5) * (o1 ^ t1) + S(6) * (o1 ^ o2) + S(7) * (t2 ^ o1) - M(7) * (t1 ^ o2);
  const DiffForm sg = S(8) * (o1 ^ o2) + S(9) * (o1 ^ t0) + S(5) * (t1 ^ o1) + S(10) * (t2 ^ o1);
  const DiffForm sp = S(11) * (o1 ^ o2) + S(12) * (o2 ^ t0) + S(13) * (t1 ^ o2) + S(14) * (t2 ^ o2);

  return {Level::e_structure,
          {{"dθ0", d(t0) - s0},
           {"dθ1", d(t1) - s1},
           {"dθ2", d(t2) - s2},
           {"dω1", d(o1) - (gh ^ o1)},
           {"dω2", d(o2) - (ph ^ o2)},
           {"dα", d(ah) - sa},
           {"dγ", d(gh) - sg},
           {"dψ", d(ph) - sp}}};
}

}  // namespace

std::array<RatFunc, 14> torsions_T(const PDESystem& sys) {
  const Bundle B(bundle_chart());
  const RatFunc b = B.var("b"), c = B.var("c"), e = B.var("e"), g = B.var("g"), h = B.var("h"), k = B.k();
  const Partials p = partials(sys, B);
  const RatFunc ch = c * h, ch2 = ch * ch;
  return {
      -b / ch,
      -e / ch,
      b * b / ch2 - p.Py / (h * h) + b * p.Pz1 / (c * h * h) + e * p.Pz2 / (g * h * h),
      b * e / ch2 - p.Qy / (h * k) + b * p.Qz1 / (ch * k) + e * p.Qz2 / (c * h * h),
      -b / ch - p.Pz1 / h,
      -p.Qz1 / k,
      -c * p.Pz2 / (g * h),
      -b / ch - p.Qz2 / h,
      b * e / ch2 - g * p.Qy / (c * h * h) + b * g * p.Qz1 / ch2 + e * p.Qz2 / (c * h * h),
      e * e / ch2 - g * p.Ry / (ch * k) + b * g * p.Rz1 / (c * ch * k) + e * p.Rz2 / (ch * k),
      -e / ch - g * p.Qz1 / ch,
      -g * p.Rz1 / (c * k),
      -p.Qz2 / h,
      -e / ch - p.Rz2 / k,
  };
}

std::array<RatFunc, 6> torsions_L(const PDESystem& sys) {
  const Bundle B(bundle_chart());
  const RatFunc b = B.var("b"), c = B.var("c"), e = B.var("e"), g = B.var("g"), h = B.var("h"), k = B.k();
  const Partials p = partials(sys, B);
  const RatFunc ch = c * h, two = B.num(2);
  return {
      -two * b / ch - p.Pz1 / h, -e / ch - p.Qz1 / k,        -c * p.Pz2 / (g * h),
      -b / ch - p.Qz2 / h,       -g * p.Rz1 / (c * k), -two * e / ch - p.Rz2 / k,
  };
}

Reduction solve_reduction(const PDESystem& sys) {
  const auto L = torsions_L(sys);
  return {to_reduced(solve_linear(L[3], "b")), to_reduced(solve_linear(L[1], "e"))};
}

Level level_from_string(std::string_view s) {
  if (s == "9") return Level::coframe_bundle;
  if (s == "10") return Level::g_structure;
  if (s == "11") return Level::reduced;
  if (s == "e") return Level::e_structure;
  throw Error("unknown structure-equation level '" + std::string(s) + "' (expected 9, 10, 11 or e)");
}

std::string to_string(Level level) {
  switch (level) {
    case Level::coframe_bundle: return "9";
    case Level::g_structure: return "10";
    case Level::reduced: return "11";
    case Level::e_structure: return "e";
  }
  return "?";
}

bool StructureCheck::holds() const {
  for (const auto& row : rows) {
    if (!row.residual.is_zero()) return false;
  }
  return true;
}

StructureCheck verify_structure_eq(const PDESystem& sys, Level level) {
  switch (level) {
    case Level::coframe_bundle: return coframe_bundle_level(sys);
    case Level::g_structure: return g_structure_level(sys);
    case Level::reduced: return reduced_level(sys);
    case Level::e_structure: return e_structure_level(sys);
  }
  throw Error("unknown structure-equation level");
}

}  // namespace jetflat::curv
