#include <chrono>
#include <functional>
#include <sstream>

#include "jetflat/cli.hpp"
#include "jetflat/duality.hpp"
#include "jetflat/fibration.hpp"
#include "jetflat/testkit/generators.hpp"
#include "jetflat/testkit/oracle.hpp"

namespace jetflat::cli {

namespace {

using jet::PDESystem;
using sym::RatFunc;
using testkit::Rng;

struct Result {
  bool passed;
  std::string detail;
};

PDESystem sys(const char* f11, const char* f12, const char* f22) { return PDESystem::parse(f11, f12, f22); }

RatFunc D(const RatFunc& f, const char* v) { return sym::derive(f, v); }

Criterion timed(int id, std::string title, const std::function<Result()>& body, double budget = 0) {
  const auto start = std::chrono::steady_clock::now();
  Result r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget > 0 && secs >= budget) {
    r.passed = false;
    r.detail += "; over the " + std::to_string(static_cast<int>(budget)) + " s budget";
  }
  return {id, std::move(title), r.passed, std::move(r.detail), secs};
}

std::string count(int good, int total, const char* what) {
  return std::to_string(good) + "/" + std::to_string(total) + " " + what;
}

// Integrable systems shared by the structure-equation and relation criteria.
struct Pool {
  std::vector<PDESystem> quadratic;  // levels 9, 10
  std::vector<PDESystem> reduced;    // levels 11, e
};

Pool make_pool(std::uint64_t seed) {
  Rng rng(seed);
  Pool pool;
  for (int i = 0; i < 20; ++i) pool.quadratic.push_back(testkit::integrable_quadratic(rng));
  for (int i = 0; i < 9; ++i) pool.reduced.push_back(testkit::hessian_quartic(rng));
  pool.reduced.push_back(sys("z1", "0", "z2"));
  return pool;
}

Result structure_equations(const Pool& pool) {
  int good = 0, total = 0;
  std::string first_failure;
  const auto run = [&](const PDESystem& s, curv::Level level) {
    ++total;
    const curv::StructureCheck check = curv::verify_structure_eq(s, level);
    if (check.holds()) {
      ++good;
    } else if (first_failure.empty()) {
      for (const auto& r : check.rows) {
        if (!r.residual.is_zero()) {
          first_failure = "; level " + curv::to_string(level) + " row " + r.name + " fails on f11 = " +
                          sym::to_string(s.f11);
          break;
        }
      }
    }
  };
  for (const auto& s : pool.quadratic) {
    run(s, curv::Level::coframe_bundle);
    run(s, curv::Level::g_structure);
  }
  for (const auto& s : pool.reduced) {
    run(s, curv::Level::reduced);
    run(s, curv::Level::e_structure);
  }
  return {good == total, count(good, total, "system-level checks hold (20 at levels 9/10, 10 at levels 11/e)") +
                             first_failure};
}

Result curvature_relations(const Pool& pool) {
  int good = 0, total = 0;
  std::string failure;
  for (const auto* list : {&pool.quadratic, &pool.reduced}) {
    for (const auto& s : *list) {
      ++total;
      const curv::RelationReport c = curv::verify_prop35(s);
      if (c.holds()) {
        ++good;
        continue;
      }
      for (const auto& r : c.relations) {
        if (!r.holds && failure.empty()) failure = "; " + r.name + " fails on f11 = " + sym::to_string(s.f11);
      }
    }
  }
  return {good == total, count(good, total, "systems satisfy all seven relations") + failure};
}

Result z_free_agreement(Rng& rng) {
  const sym::Chart& ch = jet::base_chart();
  int agree = 0, flat = 0, total = 0;
  std::string failure;
  for (int i = 0; i < 120; ++i) {
    RatFunc P(ch, 0), Q(ch, 0), R(ch, 0);
    if (i % 3 != 2) {
      // Hessians of quintics in x; every other one gets an x-only perturbation.
      const RatFunc phi = testkit::random_polynomial(rng, ch, {"x1", "x2"}, 5);
      P = D(D(phi, "x1"), "x1");
      Q = D(D(phi, "x1"), "x2");
      R = D(D(phi, "x2"), "x2");
      if (i % 3 == 1) P += testkit::random_polynomial(rng, ch, {"x1", "x2"}, 3);
    } else {
      P = testkit::random_polynomial(rng, ch, {"x1", "x2", "y"}, 3);
      Q = testkit::random_polynomial(rng, ch, {"x1", "x2", "y"}, 3);
      R = testkit::random_polynomial(rng, ch, {"x1", "x2", "y"}, 3);
    }
    ++total;
    const bool conditions = D(P, "y").is_zero() && D(Q, "y").is_zero() && D(R, "y").is_zero() &&
                            D(P, "x2") == D(Q, "x1") && D(Q, "x2") == D(R, "x1");
    const curv::Verdict fast = curv::corollary37(P, Q, R);
    const curv::Verdict full = curv::flatness(PDESystem(P, Q, R)).verdict;
    const bool ok = fast == full && (full == curv::Verdict::Flat) == conditions;
    agree += ok;
    flat += full == curv::Verdict::Flat;
    if (!ok && failure.empty()) {
      failure = "; disagreement on (" + sym::to_string(P) + ", " + sym::to_string(Q) + ", " + sym::to_string(R) + ")";
    }
  }
  return {agree == total && flat > 0 && flat < total,
          count(agree, total, "z-free triples agree") + ", " + std::to_string(flat) + " Flat" + failure};
}

Result cubic_never_flat(Rng& rng) {
  int good = 0;
  std::string failure;
  constexpr int total = 20;
  for (int i = 0; i < total; ++i) {
    const PDESystem s = testkit::integrable_cubic(rng);
    const bool integrable = jet::integrability(s).integrable();
    const bool cubic = curv::quadratic_obstruction(s) == curv::ZDegree::exceeds_quadratic;
    const curv::Verdict v = curv::flatness(s).verdict;
    const bool ok = integrable && cubic && v != curv::Verdict::Flat;
    good += ok;
    if (!ok && failure.empty()) failure = "; f11 = " + sym::to_string(s.f11) + " gives " + curv::to_string(v);
  }
  return {good == total, count(good, total, "integrable cubic systems are not Flat") + failure};
}

Result known_verdicts() {
  const sym::Chart& ch = jet::base_chart();
  std::vector<std::string> bad;
  const auto a = curv::flatness(sys("z1^2", "0", "0"));
  if (a.verdict != curv::Verdict::NotFlat || a.S.size() < 5 || !(a.S[4].base == RatFunc(ch, -2)) ||
      std::find(a.witnesses.begin(), a.witnesses.end(), "S5") == a.witnesses.end()) {
    bad.push_back("(z1^2, 0, 0)");
  }
  if (curv::flatness(sys("z1/x1", "0", "0")).verdict != curv::Verdict::Flat) bad.push_back("(z1/x1, 0, 0)");
  const auto c = curv::flatness(sys("y", "0", "0"));
  if (c.verdict != curv::Verdict::NotIntegrable || !(c.A == RatFunc::variable(ch, "z2"))) bad.push_back("(y, 0, 0)");
  std::string detail = "(z1^2,0,0) NotFlat with S5 base -2; (z1/x1,0,0) Flat; (y,0,0) NotIntegrable with A = z2";
  for (const auto& b : bad) detail += "; wrong: " + b;
  return {bad.empty(), detail};
}

Result dual_flatness() {
  const dual::DualPDE d = dual::dual_pde(dual::SolutionFamily::parse("X1*x1 + X2*x2 + Y"));
  const bool flat = !d.open && d.F11.is_zero() && d.F12.is_zero() && d.F22.is_zero();
  const bool incidence = dual::incidence_identity();
  return {flat && incidence, std::string("dual of the flat family is ") + (flat ? "(0, 0, 0)" : "nonzero") +
                                 ", incidence identity " + (incidence ? "holds" : "fails")};
}

Result contact_lift(Rng& rng) {
  int good = 0;
  constexpr int total = 12;
  for (int i = 0; i < total; ++i) {
    const jet::ScaleMap map = testkit::random_scale_map(rng);
    const jet::ContactLift lift = jet::contact_lift_verify(map);
    good += lift.identity_holds && lift.factor == D(map.Y, "y");
  }
  return {good == total, count(good, total, "scale maps pull the contact form back to Y_y times itself")};
}

Result fibration_dimensions() {
  using fib::SubgroupSpec;
  const auto C = SubgroupSpec::compact_type(), S = SubgroupSpec::scale_symmetry();
  const auto H4 = SubgroupSpec::point_stabilizer(4), H1 = SubgroupSpec::hyperplane_stabilizer(1);
  const auto I = [](std::vector<SubgroupSpec> p) { return SubgroupSpec::intersection(std::move(p)); };
  const std::vector<SubgroupSpec> specs{SubgroupSpec::full_sl4(), C, I({C, H4}), I({C, H1}), I({C, H4, H1}),
                                        S, I({S, H4}), I({S, H1}), I({S, H4, H1})};
  const std::vector<int> expected{15, 9, 7, 7, 6, 8, 5, 7, 5};
  std::vector<int> dims;
  for (const auto& s : specs) dims.push_back(fib::lie_algebra_dim(s));

  const auto quotient = [](const std::string& group) {
    std::vector<std::pair<int, std::string>> out;
    for (const auto& q : fib::fibration_table(group).quotients) out.emplace_back(q.dim, q.model);
    return out;
  };
  const std::vector<std::pair<int, std::string>> scale{{3, "R^3"}, {1, "R"}, {3, "R^3"}, {0, "{0}"}, {2, "R^2"}};
  const std::vector<std::pair<int, std::string>> compact{
      {2, "RP^2"}, {2, "RP^2"}, {3, "F(1,2)"}, {1, "S^1"}, {1, "S^1"}};
  const bool ok = dims == expected && quotient("scale") == scale && quotient("compact") == compact;
  std::ostringstream os;
  os << "dims";
  for (int d : dims) os << " " << d;
  os << "; scale quotients R^3, R, {0}, R^2 and compact quotients RP^2, RP^2, F(1,2), S^1, S^1 "
     << (ok ? "match" : "do not match");
  return {ok, os.str()};
}

Result subgroup_decompositions(std::uint64_t seed) {
  fib::Rng rng(seed);
  int good = 0, total = 0;
  double worst = 0;
  std::string failure;
  for (const auto& spec : fib::lemma_specs()) {
    for (int s = 0; s < 100; ++s) {
      ++total;
      const fib::GroupElement g = fib::random_element(spec, rng);
      const auto d = fib::decompose_in_intersection(g, spec);
      worst = std::max(worst, d.factors.residual / (1 + g.matrix().norm()));
      if (d.all_passed()) {
        ++good;
        continue;
      }
      for (const auto& c : d.checks) {
        if (!c.passed && failure.empty()) failure = "; " + spec.name() + ": " + c.name;
      }
    }
  }
  std::ostringstream os;
  os << count(good, total, "elements pass every factor check") << ", max relative residual " << worst << failure;
  return {good == total, os.str()};
}

Result finite_differences(Rng& rng) {
  const mpq_class step(1, 1000000);
  std::vector<PDESystem> systems{testkit::integrable_quadratic(rng), sys("z1^2*x2 + z1", "0", "z2^2/x1")};
  int good = 0, total = 0;
  double worst = 0;
  std::string failure;
  for (const auto& s : systems) {
    curv::DerivativeTable table(s);
    std::vector<RatFunc> bases;
    for (const auto& r : curv::curvature_recipes()) bases.push_back(table.evaluate(r));
    int points = 0;
    for (int attempt = 0; points < 10 && attempt < 100; ++attempt) {
      const auto point = testkit::random_point(rng, 5);
      std::vector<double> exact;
      try {
        for (const auto& b : bases) exact.push_back(sym::eval(b, point).get_d());
      } catch (const PoleError&) {
        continue;
      }
      ++points;
      const auto& recipes = curv::curvature_recipes();
      for (std::size_t i = 0; i < recipes.size(); ++i) {
        ++total;
        const double fd = testkit::finite_difference_base(recipes[i], s, point, step).get_d();
        const double err = testkit::relative_error(exact[i], fd);
        worst = std::max(worst, err);
        if (err < 1e-4) {
          ++good;
        } else if (failure.empty()) {
          failure = "; " + recipes[i].name + " off by " + std::to_string(err);
        }
      }
    }
    if (points < 10) return {false, "could not find 10 regular points"};
  }
  std::ostringstream os;
  os << count(good, total, "base values agree") << " at 10 points per system, max relative error " << worst
     << failure;
  return {good == total, os.str()};
}

}  // namespace

std::vector<Criterion> run_acceptance(std::uint64_t seed) {
  std::vector<Criterion> out;
  out.push_back(timed(1, "flat baseline", [] {
    const auto r = curv::flatness(PDESystem());
    bool zero = r.verdict == curv::Verdict::Flat && r.M.size() == 13 && r.S.size() == 14;
    for (const auto* list : {&r.M, &r.S}) {
      for (const auto& s : *list) zero = zero && s.is_zero();
    }
    return Result{zero, std::string("zero system ") + curv::to_string(r.verdict) +
                            (zero ? ", every curvature base is 0" : ", some curvature base is nonzero")};
  }, 1));

  Pool pool;
  out.push_back(timed(2, "structure equations", [&] {
    pool = make_pool(seed);
    return structure_equations(pool);
  }, 60));
  out.push_back(timed(3, "curvature relations", [&] { return curvature_relations(pool); }));
  out.push_back(timed(4, "z-free fast path", [&] {
    Rng rng(seed + 4);
    return z_free_agreement(rng);
  }));
  out.push_back(timed(5, "quadratic obstruction", [&] {
    Rng rng(seed + 5);
    return cubic_never_flat(rng);
  }));
  out.push_back(timed(6, "known verdicts", known_verdicts));
  out.push_back(timed(7, "dual flatness", dual_flatness));
  out.push_back(timed(8, "contact lift", [&] {
    Rng rng(seed + 8);
    return contact_lift(rng);
  }));
  out.push_back(timed(9, "fibration dimensions", fibration_dimensions));
  out.push_back(timed(10, "Iwasawa decompositions", [&] { return subgroup_decompositions(seed + 10); }, 10));
  out.push_back(timed(11, "finite-difference cross-check", [&] {
    Rng rng(seed + 11);
    return finite_differences(rng);
  }));
  return out;
}

}  // namespace jetflat::cli
