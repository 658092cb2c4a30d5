// Multivariate gcd over Z by recursive primitive polynomial remainder
// sequences, with shortcuts for the shapes that dominate in practice
// (monomials, one operand dividing the other, variables private to one side).

#include "jetflat/symexpr.hpp"

#include <algorithm>
#include <bit>

namespace jetflat::sym {

namespace {

using Coeffs = std::vector<Poly>;  // index = power of the main variable

Coeffs split(const Poly& p, std::size_t v) {
  Coeffs out(p.degree_in(v) + 1, Poly(p.chart()));
  std::vector<std::vector<Term>> buckets(out.size());
  for (const auto& t : p.terms()) {
    Term c = t;
    c.exps.set(v, 0);
    buckets[t.exps[v]].push_back(std::move(c));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = Poly::from_terms(p.chart(), std::move(buckets[i]));
  }
  return out;
}

Poly join(const Coeffs& cs, std::size_t v, const Chart& chart) {
  Poly out(chart);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs[i].is_zero()) continue;
    Exponents e;
    e.set(v, static_cast<std::uint16_t>(i));
    out += cs[i].shifted(e);
  }
  return out;
}

void trim(Coeffs& cs) {
  while (!cs.empty() && cs.back().is_zero()) cs.pop_back();
}

Poly primitive(Poly p) {
  p.make_primitive();
  return p;
}

Poly one(const Chart& chart) { return Poly(chart, 1); }

Poly gcd_integral(const Poly& a, const Poly& b);

// gcd of `seed` and all coefficients, smallest first so that every step
// involves a small operand. A zero seed means "no seed".
Poly content_of(const Coeffs& cs, const Chart& chart, Poly seed) {
  std::vector<const Poly*> order;
  for (const auto& c : cs) {
    if (!c.is_zero()) order.push_back(&c);
  }
  std::sort(order.begin(), order.end(), [](const Poly* a, const Poly* b) { return a->size() < b->size(); });
  Poly g = std::move(seed);
  for (const Poly* c : order) {
    g = g.is_zero() ? primitive(*c) : gcd_integral(g, *c);
    if (g.is_constant()) return one(chart);
  }
  return g;
}

Poly content_of(const Coeffs& cs, const Chart& chart) { return content_of(cs, chart, Poly(chart)); }

Poly exact(const Poly& a, const Poly& b) {
  auto q = a.exact_div(b);
  if (!q) throw Error("internal: expected exact polynomial division");
  return *q;
}

// Pseudo-remainder of a by b in the main variable; both nonempty, deg a >= deg b.
Coeffs pseudo_rem(Coeffs a, const Coeffs& b) {
  const std::size_t n = b.size() - 1;
  const Poly& lb = b.back();
  while (!a.empty() && a.size() - 1 >= n) {
    const std::size_t shift = a.size() - 1 - n;
    Poly la = a.back();
    if (auto q = la.exact_div(lb)) {
      for (std::size_t i = 0; i <= n; ++i) a[i + shift] -= *q * b[i];
    } else {
      for (auto& c : a) c = c * lb;
      for (std::size_t i = 0; i <= n; ++i) a[i + shift] -= la * b[i];
    }
    trim(a);
  }
  return a;
}

Poly gcd_integral(const Poly& a0, const Poly& b0) {
  const Chart& chart = a0.chart();
  if (a0.is_zero()) return primitive(b0);
  if (b0.is_zero()) return primitive(a0);
  if (a0.is_constant() || b0.is_constant()) return one(chart);

  // Common monomial factor.
  Exponents ma = a0.min_exponents(), mb = b0.min_exponents();
  Exponents m;
  for (std::size_t i = 0; i < chart.size(); ++i) m.set(i, std::min(ma[i], mb[i]));
  Poly mono = one(chart).shifted(m);
  if (a0.is_monomial() || b0.is_monomial()) return mono;
  Poly a = primitive(a0.unshifted(ma));
  Poly b = primitive(b0.unshifted(mb));

  if (a.is_constant() || b.is_constant()) return mono;
  if (a == b) return mono * a;
  if (a.size() <= b.size()) {
    if (b.exact_div(a)) return mono * a;
  } else if (a.exact_div(b)) {
    return mono * b;
  }

  // Variables that occur on one side only: replace that side by its content.
  const std::uint32_t sa = a.support(), sb = b.support();
  if (std::uint32_t only = sa ^ sb; only != 0) {
    const std::size_t v = static_cast<std::size_t>(std::countr_zero(only));
    if (sa & (1u << v)) return mono * content_of(split(a, v), chart, b);
    return mono * content_of(split(b, v), chart, a);
  }

  // Main variable of least degree keeps the remainder sequence short.
  std::size_t v = 0;
  std::uint32_t best = ~0u;
  for (std::uint32_t mask = sa; mask != 0; mask &= mask - 1) {
    const std::size_t i = static_cast<std::size_t>(std::countr_zero(mask));
    const std::uint32_t d = std::max(a.degree_in(i), b.degree_in(i));
    if (d < best) {
      best = d;
      v = i;
    }
  }

  Coeffs ca = split(a, v), cb = split(b, v);
  Poly conta = content_of(ca, chart), contb = content_of(cb, chart);
  Poly cont = gcd_integral(conta, contb);
  if (!conta.is_constant()) {
    for (auto& c : ca) c = exact(c, conta);
  }
  if (!contb.is_constant()) {
    for (auto& c : cb) c = exact(c, contb);
  }
  if (ca.size() < cb.size()) std::swap(ca, cb);

  while (true) {
    Coeffs r = pseudo_rem(ca, cb);
    if (r.empty()) break;
    if (r.size() == 1) {
      cb = Coeffs{one(chart)};
      break;
    }
    Poly cr = content_of(r, chart);
    for (auto& c : r) {
      if (!cr.is_constant()) c = exact(c, cr);
    }
    Poly joined = join(r, v, chart);
    joined.make_primitive();
    ca = std::move(cb);
    cb = split(joined, v);
  }
  Poly g = primitive(join(cb, v, chart));
  return primitive(mono * cont * g);
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
  if (!(a.chart() == b.chart())) throw ChartMismatch("gcd operands live on different charts");
  Poly ia = a, ib = b;
  if (!ia.is_zero()) ia.make_primitive();
  if (!ib.is_zero()) ib.make_primitive();
  Poly g = gcd_integral(ia, ib);
  if (!g.is_zero()) g.make_primitive();
  return g;
}

}  // namespace jetflat::sym
