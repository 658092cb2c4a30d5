#include "jetflat/curvature.hpp"

namespace jetflat::curv {

namespace {

std::size_t index_of(const std::string& name) {
  const auto& recipes = curvature_recipes();
  for (std::size_t i = 0; i < recipes.size(); ++i) {
    if (recipes[i].name == name) return i;
  }
  throw Error("unknown curvature " + name);
}

void require_integrable(const sym::RatFunc& A, const sym::RatFunc& B, const char* what) {
  if (!A.is_zero() || !B.is_zero()) throw PreconditionError(std::string(what) + " requires A = B = 0");
}

Curvatures compute(DerivativeTable& table) {
  Curvatures out;
  const auto& recipes = curvature_recipes();
  for (std::size_t i = 0; i < recipes.size(); ++i) {
    (i < 13 ? out.M : out.S).push_back(table.scalar(recipes[i]));
  }
  return out;
}

std::vector<Diagnostic> diagnostics(DerivativeTable& table, const Curvatures& K) {
  std::vector<Diagnostic> out;
  const auto& coord = coordinate_m_recipes();
  for (int i : {4, 5, 8, 9}) {
    const FiberedScalar c = table.scalar(coord[static_cast<std::size_t>(i - 1)]);
    const FiberedScalar& f = K.M[static_cast<std::size_t>(i - 1)];
    const bool same = c.on(reduced_chart()) == f.on(reduced_chart());
    out.push_back({"M" + std::to_string(i) + " coordinate form",
                   same,
                   same ? "agrees with the frame-derivative form"
                        : "coordinate base " + sym::to_string(c.base) + " vs frame base " + sym::to_string(f.base)});
  }
  const FiberedScalar printed = table.scalar(printed_s1_recipe());
  const bool same = printed.base == K.S[0].base;
  out.push_back({"S1 printed form",
                 same,
                 same ? "agrees with the structure-equation form"
                      : "printed base " + sym::to_string(printed.base) + " vs " + sym::to_string(K.S[0].base)});
  return out;
}

}  // namespace

const FiberedScalar& Curvatures::operator[](std::string_view name) const {
  const std::size_t i = index_of(std::string(name));
  return i < 13 ? M.at(i) : S.at(i - 13);
}

Curvatures curvatures(const PDESystem& sys) {
  const auto ab = jet::integrability(sys);
  require_integrable(ab.A, ab.B, "curvatures");
  DerivativeTable table(sys);
  return compute(table);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::NotIntegrable: return "NotIntegrable";
    case Verdict::Flat: return "Flat";
    case Verdict::NotFlat: return "NotFlat";
  }
  return "?";
}

CurvatureReport flatness(const PDESystem& sys) {
  const auto ab = jet::integrability(sys);
  CurvatureReport report{ab.A, ab.B, {}, {}, Verdict::NotIntegrable, {}, {}};
  if (!ab.integrable()) return report;
  DerivativeTable table(sys);
  Curvatures K = compute(table);
  for (const auto& name : test_curvature_names()) {
    if (!K[name].is_zero()) report.witnesses.push_back(name);
  }
  report.verdict = report.witnesses.empty() ? Verdict::Flat : Verdict::NotFlat;
  report.diagnostics = diagnostics(table, K);
  report.M = std::move(K.M);
  report.S = std::move(K.S);
  return report;
}

bool RelationReport::holds() const {
  for (const auto& r : relations) {
    if (!r.holds) return false;
  }
  return true;
}

RelationReport verify_prop35(const PDESystem& sys) {
  const auto ab = jet::integrability(sys);
  require_integrable(ab.A, ab.B, "the curvature relations");
  DerivativeTable table(sys);
  const Curvatures K = compute(table);
  const Chart& ch = reduced_chart();
  const RatFunc c = RatFunc::variable(ch, "c"), g = RatFunc::variable(ch, "g"), h = RatFunc::variable(ch, "h");
  const RatFunc k = c * h / g, one(ch, 1), two(ch, 2);
  const auto V = [&](const char* name) { return K[name].on(ch); };
  // Frame derivative of a curvature: fiber coordinates are constant along the base frame.
  const auto Dv = [&](const char* name, Dir dir) {
    const FiberedScalar& s = K[name];
    return FiberedScalar{s.fiber, derive_dir(sys, s.base, dir)}.on(ch);
  };
  const auto F = [&](Source src, Dir dir) { return sym::embed(table.get({src, {dir}}), ch); };
  const RatFunc Pt1 = F(Source::f11, Dir::theta1), Qt1 = F(Source::f12, Dir::theta1);
  const RatFunc Qt2 = F(Source::f12, Dir::theta2), Rt2 = F(Source::f22, Dir::theta2);
  const RatFunc ghc = g * h / c, ckg = c * k / g;

  const RatFunc m4 = -(one / (h * h)) * (-ghc * Dv("M1", Dir::omega2) + two * ghc * V("M1") * Qt1 -
                                         ghc * V("M1") * Rt2);
  const RatFunc m9 = -(one / (k * k)) * (-ckg * Dv("M6", Dir::omega1) - ckg * V("M6") * Pt1 +
                                         two * ckg * V("M6") * Qt2);
  const RatFunc s3 = -(k / (c * h)) * Dv("M7", Dir::theta2);
  const RatFunc s4 = -(one / c) * Dv("M3", Dir::theta1);
  const RatFunc s7 = -(one / c) * Dv("M1", Dir::theta1) + V("M3");
  const RatFunc s10 = (one / c) * Dv("M1", Dir::theta1) - two * V("M3");
  const RatFunc s10_printed = -(one / c) * Dv("M1", Dir::theta1) + two * V("M3");
  const RatFunc s13 = -two * V("M7") + (one / g) * Dv("M6", Dir::theta2);

  RelationReport out;
  out.relations = {{"M4", V("M4") == m4}, {"M9", V("M9") == m9},  {"S3", V("S3") == s3},
                   {"S4", V("S4") == s4}, {"S7", V("S7") == s7},  {"S10", V("S10") == s10},
                   {"S13", V("S13") == s13}};
  out.printed_s10_holds = V("S10") == s10_printed;
  return out;
}

Verdict corollary37(const RatFunc& P, const RatFunc& Q, const RatFunc& R) {
  for (const RatFunc* f : {&P, &Q, &R}) {
    if (!(f->chart() == jet::base_chart())) throw ChartMismatch("P, Q, R must be over (x1, x2, y, z1, z2)");
    if (f->depends_on("z1") || f->depends_on("z2")) throw Error("P, Q, R must not depend on z1 or z2");
  }
  const auto D = [](const RatFunc& f, const char* v) { return sym::derive(f, v); };
  const bool flat = D(P, "y").is_zero() && D(Q, "y").is_zero() && D(R, "y").is_zero() &&
                    D(P, "x2") == D(Q, "x1") && D(Q, "x2") == D(R, "x1");
  return flat ? Verdict::Flat : Verdict::NotIntegrable;
}

std::string to_string(ZDegree z) {
  switch (z) {
    case ZDegree::within_quadratic: return "within_quadratic";
    case ZDegree::exceeds_quadratic: return "exceeds_quadratic";
    case ZDegree::inapplicable: return "inapplicable";
  }
  return "?";
}

ZDegree quadratic_obstruction(const PDESystem& sys) {
  const std::size_t z1 = jet::base_chart().require("z1"), z2 = jet::base_chart().require("z2");
  bool exceeds = false;
  for (const RatFunc* f : {&sys.f11, &sys.f12, &sys.f22}) {
    if (f->den().degree_in(z1) > 0 || f->den().degree_in(z2) > 0) return ZDegree::inapplicable;
    for (const auto& t : f->num().terms()) exceeds = exceeds || t.exps[z1] + t.exps[z2] > 2;
  }
  return exceeds ? ZDegree::exceeds_quadratic : ZDegree::within_quadratic;
}

}  // namespace jetflat::curv
