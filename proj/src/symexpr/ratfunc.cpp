#include "jetflat/symexpr.hpp"

#include <cmath>

namespace jetflat::sym {

namespace {

void require_same_chart(const RatFunc& a, const RatFunc& b) {
  if (!(a.chart() == b.chart())) throw ChartMismatch("operands live on different charts");
}

Poly exact(const Poly& a, const Poly& b) {
  auto q = a.exact_div(b);
  if (!q) throw Error("internal: expected exact polynomial division");
  return *q;
}

}  // namespace

RatFunc::RatFunc(Chart chart) : num_(chart), den_(chart, 1) {}

RatFunc::RatFunc(Chart chart, const mpq_class& constant) : num_(chart), den_(chart, 1) {
  num_ = Poly(chart, constant.get_num());
  den_ = Poly(chart, constant.get_den());
}

RatFunc::RatFunc(const Poly& num) : num_(num), den_(num.chart(), 1) { canonicalize(); }

RatFunc::RatFunc(const Poly& num, const Poly& den) : num_(num), den_(den) {
  if (!(num.chart() == den.chart())) throw ChartMismatch("numerator and denominator charts differ");
  canonicalize();
}

RatFunc::RatFunc(Poly num, Poly den, bool already_canonical) : num_(std::move(num)), den_(std::move(den)) {
  if (!already_canonical) canonicalize();
}

RatFunc RatFunc::variable(const Chart& chart, std::string_view name) {
  return RatFunc(Poly::variable(chart, chart.require(name)), Poly(chart, 1), true);
}

void RatFunc::canonicalize() {
  if (den_.is_zero()) throw DivisionByZero("division by the zero polynomial");
  if (num_.is_zero()) {
    den_ = Poly(num_.chart(), 1);
    return;
  }
  if (!den_.is_constant()) {
    Poly g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = exact(num_, g);
      den_ = exact(den_, g);
    }
  }
  // num = num_p / fn, den = den_p / fd with num_p, den_p primitive.
  mpq_class fn = num_.make_primitive();
  mpq_class fd = den_.make_primitive();
  mpq_class r = fd / fn;
  num_ = num_.scaled(mpq_class(r.get_num()));
  den_ = den_.scaled(mpq_class(r.get_den()));
}

mpq_class RatFunc::constant_value() const {
  if (num_.is_zero()) return 0;
  return num_.constant_value() / den_.constant_value();
}

RatFunc RatFunc::operator-() const { return RatFunc(-num_, den_, true); }

RatFunc& RatFunc::operator+=(const RatFunc& other) {
  require_same_chart(*this, other);
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  if (den_ == other.den_) {
    num_ += other.num_;
    canonicalize();
    return *this;
  }
  if (den_.is_constant() && other.den_.is_constant()) {
    num_ = num_ * other.den_ + other.num_ * den_;
    den_ = den_ * other.den_;
    canonicalize();
    return *this;
  }
  Poly g = gcd(den_, other.den_);
  Poly d1 = exact(den_, g), d2 = exact(other.den_, g);
  num_ = num_ * d2 + other.num_ * d1;
  den_ = den_ * d2;
  canonicalize();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& other) { return *this += -other; }

RatFunc& RatFunc::operator*=(const RatFunc& other) {
  require_same_chart(*this, other);
  if (is_zero()) return *this;
  if (other.is_zero()) return *this = RatFunc(chart());
  // Cross-cancel so that no new common factor can arise.
  Poly a = num_, b = den_, c = other.num_, d = other.den_;
  if (!d.is_constant()) {
    Poly g = gcd(a, d);
    if (!g.is_constant()) {
      a = exact(a, g);
      d = exact(d, g);
    }
  }
  if (!b.is_constant()) {
    Poly g = gcd(c, b);
    if (!g.is_constant()) {
      c = exact(c, g);
      b = exact(b, g);
    }
  }
  num_ = a * c;
  den_ = b * d;
  mpq_class fn = num_.make_primitive();
  mpq_class fd = den_.make_primitive();
  mpq_class r = fd / fn;
  num_ = num_.scaled(mpq_class(r.get_num()));
  den_ = den_.scaled(mpq_class(r.get_den()));
  return *this;
}

RatFunc& RatFunc::operator/=(const RatFunc& other) {
  require_same_chart(*this, other);
  if (other.is_zero()) throw DivisionByZero("division by the zero rational function");
  return *this *= RatFunc(other.den_, other.num_, true).normalized_sign();
}

RatFunc RatFunc::normalized_sign() const {
  if (sgn(den_.leading_term().coeff) > 0) return *this;
  return RatFunc(-num_, -den_, true);
}

RatFunc RatFunc::scaled(const mpq_class& factor) const {
  if (sgn(factor) == 0) return RatFunc(chart());
  return *this * RatFunc(chart(), factor);
}

RatFunc RatFunc::pow(int n) const {
  if (n < 0) {
    if (is_zero()) throw DivisionByZero("negative power of zero");
    return RatFunc(den_.pow(static_cast<unsigned>(-n)), num_.pow(static_cast<unsigned>(-n)), true)
        .normalized_sign();
  }
  // Powers of coprime polynomials stay coprime.
  return RatFunc(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)), true);
}

bool RatFunc::depends_on(std::string_view name) const {
  auto i = chart().index_of(name);
  if (!i) return false;
  return ((num_.support() | den_.support()) & (1u << *i)) != 0;
}

RatFunc arith(ArithOp op, const RatFunc& f, const RatFunc& g) {
  switch (op) {
    case ArithOp::add: return f + g;
    case ArithOp::sub: return f - g;
    case ArithOp::mul: return f * g;
    case ArithOp::div: return f / g;
    case ArithOp::neg: return -f;
  }
  throw Error("unknown arithmetic operation");
}

RatFunc derive(const RatFunc& f, std::size_t var) {
  if (var >= f.chart().size()) throw MissingBinding("coordinate index out of range");
  Poly dn = f.num().derivative(var);
  if (f.den().is_constant()) return RatFunc(dn, f.den());
  Poly dd = f.den().derivative(var);
  if (dd.is_zero()) return RatFunc(dn, f.den());
  return RatFunc(dn * f.den() - f.num() * dd, f.den() * f.den());
}

RatFunc derive(const RatFunc& f, std::string_view var) {
  return derive(f, f.chart().require(var));
}

namespace {

// Powers of a replacement, computed on demand.
struct PowerCache {
  const RatFunc* base = nullptr;
  std::vector<Poly> num_pows, den_pows;

  const Poly& num_pow(std::size_t k) {
    while (num_pows.size() <= k) {
      num_pows.push_back(num_pows.empty() ? Poly(base->chart(), 1) : num_pows.back() * base->num());
    }
    return num_pows[k];
  }
  const Poly& den_pow(std::size_t k) {
    while (den_pows.size() <= k) {
      den_pows.push_back(den_pows.empty() ? Poly(base->chart(), 1) : den_pows.back() * base->den());
    }
    return den_pows[k];
  }
};

// Numerator of p(r_1, ..., r_n) over the common denominator prod den_i^{degs_i}.
Poly substitute_poly(const Poly& p, std::vector<PowerCache>& caches,
                     const std::vector<std::uint16_t>& degs, const Chart& target) {
  Poly num(target);
  for (const auto& t : p.terms()) {
    Poly term(target, t.coeff);
    for (std::size_t i = 0; i < caches.size(); ++i) {
      const std::uint16_t k = t.exps[i];
      if (degs[i] == 0) continue;
      term = term * caches[i].num_pow(k);
      if (degs[i] > k) term = term * caches[i].den_pow(degs[i] - k);
    }
    num += term;
  }
  return num;
}

}  // namespace

RatFunc substitute(const RatFunc& f, const Bindings& bindings) {
  const Chart& src = f.chart();
  const std::uint32_t used = f.num().support() | f.den().support();
  std::optional<Chart> target;
  std::vector<PowerCache> caches(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto it = bindings.find(src.name(i));
    if (it == bindings.end()) {
      if (used & (1u << i)) throw MissingBinding("no binding for coordinate '" + src.name(i) + "'");
      continue;
    }
    if (!target) {
      target = it->second.chart();
    } else if (!(*target == it->second.chart())) {
      throw ChartMismatch("bindings live on different charts");
    }
    caches[i].base = &it->second;
  }
  if (!target) {
    if (!bindings.empty()) {
      target = bindings.begin()->second.chart();
    } else {
      throw MissingBinding("substitution without bindings");
    }
  }
  if (f.is_constant()) return RatFunc(*target, f.constant_value());
  std::vector<std::uint16_t> degs(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    degs[i] = (used & (1u << i)) ? std::max(f.num().degree_in(i), f.den().degree_in(i)) : 0;
  }
  // Numerator and denominator share the common denominator, so it cancels.
  Poly nn = substitute_poly(f.num(), caches, degs, *target);
  Poly dn = substitute_poly(f.den(), caches, degs, *target);
  if (dn.is_zero()) throw DivisionByZero("substituted denominator is identically zero");
  return RatFunc(nn, dn);
}

Bindings identity_bindings(const Chart& from, const Chart& to) {
  Bindings b;
  for (const auto& n : from.names()) b.emplace(n, RatFunc::variable(to, n));
  return b;
}

RatFunc embed(const RatFunc& f, const Chart& target) {
  if (f.chart() == target) return f;
  return RatFunc(f.num().embed(target), f.den().embed(target));
}

mpq_class eval(const RatFunc& f, std::span<const mpq_class> point) {
  mpq_class d = f.den().eval(point);
  if (sgn(d) == 0) throw PoleError("denominator vanishes at the evaluation point");
  return f.num().eval(point) / d;
}

double eval(const RatFunc& f, std::span<const double> point) {
  double d = f.den().eval(point);
  if (d == 0.0) throw PoleError("denominator vanishes at the evaluation point");
  return f.num().eval(point) / d;
}

mpq_class eval(const RatFunc& f, const std::map<std::string, mpq_class, std::less<>>& point) {
  std::vector<mpq_class> values(f.chart().size());
  const std::uint32_t used = f.num().support() | f.den().support();
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto it = point.find(f.chart().name(i));
    if (it != point.end()) {
      values[i] = it->second;
    } else if (used & (1u << i)) {
      throw MissingBinding("no value for coordinate '" + f.chart().name(i) + "'");
    }
  }
  return eval(f, std::span<const mpq_class>(values));
}

}  // namespace jetflat::sym
