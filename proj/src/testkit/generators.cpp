#include "jetflat/testkit/generators.hpp"

namespace jetflat::testkit {

using jet::PDESystem;
using sym::RatFunc;

namespace {

const sym::Chart& base() { return jet::base_chart(); }
RatFunc v(const char* name) { return RatFunc::variable(base(), name); }
RatFunc k(const mpq_class& c) { return RatFunc(base(), c); }

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

RatFunc nonzero_rational(Rng& rng) {
  mpq_class c;
  do {
    c = random_rational(rng);
  } while (c == 0);
  return k(c);
}

// f_ij(x, y, z - grad φ) + φ_ij, then x = M u, z = M^{-T} w, f -> M^T f M.
PDESystem shift_and_mix(Rng& rng, const PDESystem& seed) {
  const RatFunc phi = random_polynomial(rng, base(), {"x1", "x2"}, 2);
  const RatFunc p1 = sym::derive(phi, "x1"), p2 = sym::derive(phi, "x2");
  sym::Bindings shift = sym::identity_bindings(base(), base());
  shift.insert_or_assign("z1", v("z1") - p1);
  shift.insert_or_assign("z2", v("z2") - p2);
  const RatFunc g11 = sym::substitute(seed.f11, shift) + sym::derive(p1, "x1");
  const RatFunc g12 = sym::substitute(seed.f12, shift) + sym::derive(p1, "x2");
  const RatFunc g22 = sym::substitute(seed.f22, shift) + sym::derive(p2, "x2");

  mpq_class m[2][2], det;
  do {
    for (auto& row : m) {
      for (auto& e : row) e = random_rational(rng);
    }
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  } while (det == 0);
  // M^{-T} = (1/det) [[m11, -m10], [-m01, m00]]
  sym::Bindings mix = sym::identity_bindings(base(), base());
  mix.insert_or_assign("x1", k(m[0][0]) * v("x1") + k(m[0][1]) * v("x2"));
  mix.insert_or_assign("x2", k(m[1][0]) * v("x1") + k(m[1][1]) * v("x2"));
  mix.insert_or_assign("z1", (k(m[1][1]) * v("z1") - k(m[1][0]) * v("z2")) / k(det));
  mix.insert_or_assign("z2", (k(-m[0][1]) * v("z1") + k(m[0][0]) * v("z2")) / k(det));
  const RatFunc G[2][2] = {{sym::substitute(g11, mix), sym::substitute(g12, mix)},
                           {sym::substitute(g12, mix), sym::substitute(g22, mix)}};
  const auto entry = [&](int i, int j) {
    RatFunc s = k(0);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) s += k(m[a][i] * m[b][j]) * G[a][b];
    }
    return s;
  };
  return PDESystem(entry(0, 0), entry(0, 1), entry(1, 1));
}

PDESystem decoupled(Rng& rng, int z_degree) {
  const auto side = [&](const char* x, const char* z) {
    RatFunc p = random_polynomial(rng, base(), {x}, 2) + random_polynomial(rng, base(), {x}, 1) * v(z);
    for (int d = 2; d <= z_degree; ++d) p += k(random_rational(rng)) * v(z).pow(d);
    return p;
  };
  RatFunc p = side("x1", "z1");
  RatFunc q = side("x2", "z2");
  return PDESystem(p, k(0), q);
}

}  // namespace

mpq_class random_rational(Rng& rng, int max_num, int max_den) {
  mpq_class q(uniform(rng, -max_num, max_num), uniform(rng, 1, max_den));
  q.canonicalize();
  return q;
}

std::vector<mpq_class> random_point(Rng& rng, std::size_t size) {
  std::vector<mpq_class> p(size);
  for (auto& x : p) {
    do {
      x = random_rational(rng, 9, 7);
    } while (x == 0);
  }
  return p;
}

RatFunc random_polynomial(Rng& rng, const sym::Chart& chart, const std::vector<std::string>& vars, int degree) {
  std::vector<sym::Term> terms;
  std::vector<std::size_t> idx;
  for (const auto& n : vars) idx.push_back(chart.require(n));
  // Enumerate exponent vectors of total degree <= degree.
  std::vector<int> e(idx.size(), 0);
  while (true) {
    int total = 0;
    for (int x : e) total += x;
    if (total <= degree) {
      sym::Term t{sym::Exponents{}, random_rational(rng)};
      for (std::size_t i = 0; i < idx.size(); ++i) t.exps.set(idx[i], static_cast<std::uint16_t>(e[i]));
      terms.push_back(std::move(t));
    }
    std::size_t pos = 0;
    while (pos < e.size() && ++e[pos] > degree) e[pos++] = 0;
    if (pos == e.size()) break;
  }
  return RatFunc(sym::Poly::from_terms(chart, std::move(terms)));
}

RatFunc random_expression(Rng& rng, const sym::Chart& chart, int depth) {
  const int pick = uniform(rng, 0, 9);
  if (depth == 0 || pick < 2) {
    if (uniform(rng, 0, 9) < 3) return RatFunc(chart, random_rational(rng));
    return RatFunc::variable(chart, chart.name(static_cast<std::size_t>(uniform(rng, 0, int(chart.size()) - 1))));
  }
  RatFunc a = random_expression(rng, chart, depth - 1);
  RatFunc b = random_expression(rng, chart, depth - 1);
  switch (pick % 5) {
    case 0: return a + b;
    case 1: return a - b;
    case 2: return a * b;
    case 3: return b.is_zero() ? a : a / b;
    default: return a.pow(2);
  }
}

PDESystem hessian_quartic(Rng& rng) {
  const RatFunc F = random_polynomial(rng, base(), {"x1", "x2"}, 4);
  const RatFunc F1 = sym::derive(F, "x1");
  return PDESystem(sym::derive(F1, "x1"), sym::derive(F1, "x2"), sym::derive(sym::derive(F, "x2"), "x2"));
}

PDESystem integrable_quadratic(Rng& rng) {
  PDESystem seed;
  switch (uniform(rng, 0, 2)) {
    case 0: seed = decoupled(rng, 2); break;
    case 1: {
      const RatFunc lambda = nonzero_rational(rng);
      seed = PDESystem(lambda * v("z1").pow(2), lambda * v("z1") * v("z2"), lambda * v("z2").pow(2));
      break;
    }
    default: seed = hessian_quartic(rng); break;
  }
  return shift_and_mix(rng, seed);
}

PDESystem random_quadratic(Rng& rng) {
  const auto entry = [&] {
    RatFunc s = k(0);
    const RatFunc monos[] = {k(1), v("z1"), v("z2"), v("z1").pow(2), v("z1") * v("z2"), v("z2").pow(2)};
    for (const auto& m : monos) s += random_polynomial(rng, base(), {"x1", "x2", "y"}, 1) * m;
    return s;
  };
  RatFunc a = entry(), b = entry(), c = entry();
  return PDESystem(a, b, c);
}

PDESystem integrable_cubic(Rng& rng) {
  PDESystem seed = decoupled(rng, 3);
  // Ensure a genuine cubic term survives.
  RatFunc cubic = nonzero_rational(rng) * v("z1").pow(3);
  seed = PDESystem(seed.f11 + cubic, seed.f12, seed.f22);
  return shift_and_mix(rng, seed);
}

jet::ScaleMap random_scale_map(Rng& rng) {
  const auto one_var = [&](const char* x) {
    const RatFunc t = v(x);
    switch (uniform(rng, 0, 3)) {
      case 0: return t.pow(2) + k(random_rational(rng));
      case 1: return nonzero_rational(rng) * t + k(random_rational(rng));
      case 2: return k(1) / t;
      default: return t / (t + k(1));
    }
  };
  const RatFunc X1 = one_var("x1"), X2 = one_var("x2");
  const RatFunc m = k(1) + random_polynomial(rng, base(), {"x1", "x2"}, 1).pow(2);
  const RatFunc n = random_polynomial(rng, base(), {"x1", "x2"}, 2);
  RatFunc Y = uniform(rng, 0, 2) == 0 ? v("y").pow(2) * m + n : v("y") * m + n;
  if (uniform(rng, 0, 3) == 0) Y = v("y") / v("x1");
  return jet::ScaleMap(X1, X2, Y);
}

PDESystem flat_by_scale_map(Rng& rng) { return jet::pull_back_system(PDESystem(), random_scale_map(rng)); }

}  // namespace jetflat::testkit
