#include "jetflat/curvature.hpp"

namespace jetflat::curv {

namespace {

constexpr const char* kFiberNames[5] = {"b", "c", "e", "g", "h"};

constexpr Dir t0 = Dir::theta0, t1 = Dir::theta1, t2 = Dir::theta2, o1 = Dir::omega1, o2 = Dir::omega2;

Factor P(std::initializer_list<Dir> p = {}) { return {Source::f11, p}; }
Factor Q(std::initializer_list<Dir> p = {}) { return {Source::f12, p}; }
Factor R(std::initializer_list<Dir> p = {}) { return {Source::f22, p}; }
Factor Z1() { return {Source::z1, {}}; }
Factor Z2() { return {Source::z2, {}}; }

FiberMonomial fib(int coefficient, int c, int g, int h, int k = 0) {
  return FiberMonomial::make(coefficient, c, g, h, k);
}

std::string power(const char* name, int e) { return e == 1 ? name : std::string(name) + "^" + std::to_string(e); }

std::vector<Recipe> make_curvatures() {
  std::vector<Recipe> out;
  out.push_back({"M1", fib(-1, 1, -1, -1), {{1, {P({t2})}}}});
  out.push_back({"M2", fib(-1, -1, 0, -1), {{1, {Q({t2, t1})}}}});
  out.push_back({"M3", fib(-1, 0, -1, -1), {{1, {Q({t2, t2})}}}});
  out.push_back({"M4", fib(-1, 0, 0, -2), {{1, {P({t2, o2})}}, {-2, {P({t2}), Q({t1})}}, {1, {P({t2}), R({t2})}}}});
  out.push_back({"M5", fib(1, 0, 0, -1, -1), {{1, {Q({t0})}}, {1, {Q({t2}), Q({t1})}}, {-1, {Q({t2, o2})}}}});
  out.push_back({"M6", fib(-1, -1, 1, 0, -1), {{1, {R({t1})}}}});
  out.push_back({"M7", fib(-1, -1, 0, 0, -1), {{1, {Q({t1, t1})}}}});
  out.push_back({"M8", fib(1, 0, 0, -1, -1), {{1, {Q({t0})}}, {1, {Q({t1}), Q({t2})}}, {-1, {Q({t1, o1})}}}});
  out.push_back({"M9", fib(-1, 0, 0, 0, -2), {{-2, {Q({t2}), R({t1})}}, {1, {R({t1, o1})}}, {1, {P({t1}), R({t1})}}}});
  out.push_back({"M10", fib(1, 0, 0, -1), {{1, {P({t1})}}, {-1, {Q({t2})}}}});
  out.push_back({"M11", fib(1, 0, 0, 0, -1), {{1, {Q({t1})}}}});
  out.push_back({"M12", fib(1, 0, 0, -1), {{1, {Q({t2})}}}});
  out.push_back({"M13", fib(1, 0, 0, 0, -1), {{1, {R({t2})}}, {-1, {Q({t1})}}}});

  out.push_back({"S1", fib(1, -1, 0, -2),
                 {{1, {P({t2, t1, o2})}},
                  {1, {P({t2, t2}), R({t1})}},
                  {1, {P({t2, t1}), R({t2})}},
                  {-1, {Q({t1}), P({t1, t2})}},
                  {-1, {P({t2}), Q({t1, t1})}},
                  {1, {P({t2}), R({t1, t2})}}}});
  out.push_back({"S2", fib(1, -1, 0, -1, -1),
                 {{1, {Q({t2, t1, o2})}}, {-1, {Q({t1, t0})}}, {-1, {Q({t1, t1}), Q({t2})}}}});
  out.push_back({"S3", fib(1, -2, 0, -1), {{1, {Q({t2, t1, t1})}}}});
  out.push_back({"S4", fib(1, -1, -1, -1), {{1, {Q({t2, t1, t2})}}}});
  out.push_back({"S5", fib(1, -1, 0, -1), {{2, {Q({t2, t1})}}, {-1, {P({t1, t1})}}}});
  out.push_back({"S6", fib(1, 0, 0, -1, -1),
                 {{-1, {Q({t0})}}, {-1, {Q({t1}), Q({t2})}}, {1, {P({t2}), R({t1})}}, {1, {Q({t2, o2})}}}});
  out.push_back({"S7", fib(1, 0, -1, -1), {{1, {P({t1, t2})}}, {-1, {Q({t2, t2})}}}});
  out.push_back({"S8", fib(1, 0, 0, -1, -1), {{1, {P({t1, o2})}}, {-2, {Q({t2, o2})}}}});
  out.push_back({"S9", fib(1, -1, 0, -2),
                 {{1, {P({t1, t0})}},
                  {-2, {Q({t2, t0})}},
                  {1, {P({t1, t1}), Q({t2})}},
                  {1, {P({t1, t2}), Q({t1})}},
                  {-2, {Q({t1, t2}), Q({t2})}},
                  {-2, {Q({t2, t2}), Q({t1})}}}});
  out.push_back({"S10", fib(1, 0, -1, -1), {{-1, {P({t1, t2})}}, {2, {Q({t2, t2})}}}});
  out.push_back({"S11", fib(1, 0, 0, -1, -1), {{2, {Q({t1, o1})}}, {-1, {R({t2, o1})}}}});
  out.push_back({"S12", fib(1, -1, 0, -1, -1),
                 {{-2, {Q({t1, t0})}},
                  {-2, {Q({t1, t1}), Q({t2})}},
                  {-2, {Q({t1, t2}), Q({t1})}},
                  {1, {R({t2, t0})}},
                  {1, {R({t1, t2}), Q({t2})}},
                  {1, {R({t2, t2}), Q({t1})}}}});
  out.push_back({"S13", fib(1, -1, 0, 0, -1), {{2, {Q({t1, t1})}}, {-1, {R({t1, t2})}}}});
  out.push_back({"S14", fib(1, 0, -1, 0, -1), {{2, {Q({t1, t2})}}, {-1, {R({t2, t2})}}}});
  return out;
}

Recipe make_printed_s1() {
  return {"S1", fib(1, -1, 0, -2),
          {{1, {P({t2, t1, o2})}},
           {1, {P({t2, t2}), R({t1})}},
           {1, {P({t2, t1}), R({t2})}},
           {-1, {Q({t2, t1}), P({t2})}},
           {-1, {Q({t2, t2}), Q({t2})}},
           {-1, {Q({t2, t1}), P({t1})}},
           {2, {Q({t2, t1}), Q({t2})}}}};
}

// Q1 = (f12)_{z1}, Q2 = (f12)_{z2}; x-partials are plain coordinate derivatives.
std::vector<Recipe> make_coordinate_m() {
  const std::vector<Recipe>& frame = curvature_recipes();
  std::vector<Recipe> out(frame.begin(), frame.begin() + 13);
  constexpr Dir x1 = Dir::x1, x2 = Dir::x2;
  out[3] = {"M4", fib(-1, 0, 0, -2),
            {{1, {Q({t2}), Q({t2})}},
             {-1, {P({t0})}},
             {-1, {Q({t2}), P({t1})}},
             {-1, {P({t2}), Q({t1})}},
             {1, {Q({t2, x1})}},
             {1, {Q({t2, t0}), Z1()}},
             {1, {Q({t2, t1}), P()}},
             {1, {Q({t2, t2}), Q()}}}};
  out[4] = {"M5", fib(1, 0, 0, -1, -1),
            {{1, {Q({t0})}},
             {1, {Q({t2}), Q({t1})}},
             {-1, {Q({t2, x2})}},
             {-1, {Q({t2, t0}), Z2()}},
             {-1, {Q({t2, t1}), Q()}},
             {-1, {Q({t2, t2}), R()}}}};
  out[7] = {"M8", fib(1, 0, 0, -1, -1),
            {{1, {Q({t0})}},
             {1, {Q({t1}), Q({t2})}},
             {-1, {Q({t1, x1})}},
             {-1, {Q({t1, t0}), Z1()}},
             {-1, {Q({t1, t1}), P()}},
             {-1, {Q({t1, t2}), Q()}}}};
  out[8] = {"M9", fib(-1, 0, 0, 0, -2),
            {{1, {Q({t1}), Q({t1})}},
             {-1, {R({t0})}},
             {-1, {Q({t2}), R({t1})}},
             {-1, {Q({t1}), R({t2})}},
             {1, {Q({t1, x2})}},
             {1, {Q({t1, t0}), Z2()}},
             {1, {Q({t1, t1}), Q()}},
             {1, {Q({t1, t2}), R()}}}};
  return out;
}

}  // namespace

const Chart& bundle_chart() {
  static const Chart chart({"x1", "x2", "y", "z1", "z2", "b", "c", "e", "g", "h"});
  return chart;
}

const Chart& reduced_chart() {
  static const Chart chart({"x1", "x2", "y", "z1", "z2", "c", "g", "h"});
  return chart;
}

FiberMonomial FiberMonomial::make(const mpq_class& coefficient, int c, int g, int h, int k) {
  FiberMonomial m;
  m.coefficient = coefficient;
  m.exps = {0, c + k, 0, g - k, h + k};
  return m;
}

RatFunc FiberMonomial::on(const Chart& chart) const {
  RatFunc out(chart, coefficient);
  for (std::size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] == 0) continue;
    const RatFunc v = RatFunc::variable(chart, kFiberNames[i]);
    out *= exps[i] > 0 ? v.pow(exps[i]) : RatFunc(chart, 1) / v.pow(-exps[i]);
  }
  return out;
}

std::string to_string(const FiberMonomial& m) {
  std::vector<std::string> num, den;
  const mpz_class n = abs(m.coefficient.get_num()), d = m.coefficient.get_den();
  if (n != 1) num.push_back(n.get_str());
  if (d != 1) den.push_back(d.get_str());
  for (std::size_t i = 0; i < m.exps.size(); ++i) {
    if (m.exps[i] > 0) num.push_back(power(kFiberNames[i], m.exps[i]));
    if (m.exps[i] < 0) den.push_back(power(kFiberNames[i], -m.exps[i]));
  }
  const auto join = [](const std::vector<std::string>& parts) {
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : "*") + p;
    return s;
  };
  std::string out = m.coefficient < 0 ? "-" : "";
  if (m.coefficient == 0) return "0";
  out += num.empty() ? "1" : join(num);
  if (!den.empty()) out += den.size() == 1 ? "/" + den[0] : "/(" + join(den) + ")";
  return out;
}

RatFunc FiberedScalar::on(const Chart& chart) const { return fiber.on(chart) * sym::embed(base, chart); }

const std::vector<Recipe>& curvature_recipes() {
  static const std::vector<Recipe> recipes = make_curvatures();
  return recipes;
}

const Recipe& printed_s1_recipe() {
  static const Recipe recipe = make_printed_s1();
  return recipe;
}

const std::vector<Recipe>& coordinate_m_recipes() {
  static const std::vector<Recipe> recipes = make_coordinate_m();
  return recipes;
}

const std::vector<std::string>& test_curvature_names() {
  static const std::vector<std::string> names{"M1", "M3", "M5", "M6", "M7", "M8", "S1",  "S2",
                                              "S5", "S6", "S8", "S9", "S11", "S12", "S14"};
  return names;
}

RatFunc derive_dir(const PDESystem& sys, const RatFunc& f, Dir dir) {
  switch (dir) {
    case Dir::theta0: return jet::frame_derive(sys, f, jet::Frame::theta0);
    case Dir::theta1: return jet::frame_derive(sys, f, jet::Frame::theta1);
    case Dir::theta2: return jet::frame_derive(sys, f, jet::Frame::theta2);
    case Dir::omega1: return jet::frame_derive(sys, f, jet::Frame::omega1);
    case Dir::omega2: return jet::frame_derive(sys, f, jet::Frame::omega2);
    case Dir::x1: return sym::derive(f, "x1");
    case Dir::x2: return sym::derive(f, "x2");
  }
  throw Error("unknown direction");
}

DerivativeTable::DerivativeTable(PDESystem sys) : sys_(std::move(sys)) {}

const RatFunc& DerivativeTable::get(const Factor& factor) {
  auto key = std::make_pair(factor.source, factor.path);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  RatFunc value(jet::base_chart());
  if (factor.path.empty()) {
    switch (factor.source) {
      case Source::f11: value = sys_.f11; break;
      case Source::f12: value = sys_.f12; break;
      case Source::f22: value = sys_.f22; break;
      case Source::z1: value = RatFunc::variable(jet::base_chart(), "z1"); break;
      case Source::z2: value = RatFunc::variable(jet::base_chart(), "z2"); break;
    }
  } else {
    Factor prefix{factor.source, {factor.path.begin(), factor.path.end() - 1}};
    value = derive_dir(sys_, get(prefix), factor.path.back());
  }
  return cache_.emplace(std::move(key), std::move(value)).first->second;
}

RatFunc DerivativeTable::evaluate(const Recipe& recipe) {
  RatFunc sum(jet::base_chart());
  for (const Product& p : recipe.terms) {
    RatFunc prod(jet::base_chart(), p.coefficient);
    for (const Factor& f : p.factors) {
      prod *= get(f);
      if (prod.is_zero()) break;
    }
    sum += prod;
  }
  return sum;
}

}  // namespace jetflat::curv
