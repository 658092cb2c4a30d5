#include "jetflat/symexpr.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

namespace jetflat {

ParseError::ParseError(const std::string& what, std::size_t position)
    : Error(what + " at position " + std::to_string(position)), position_(position) {}

UnknownIdentifier::UnknownIdentifier(const std::string& name, std::size_t position)
    : ParseError("unknown identifier '" + name + "'", position), name_(name) {}

namespace sym {

Chart::Chart(std::vector<std::string> names) {
  if (names.size() > kMaxChartSize) {
    throw Error("chart has " + std::to_string(names.size()) + " coordinates; at most " +
                std::to_string(kMaxChartSize) + " are supported");
  }
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw Error("chart coordinate names must be nonempty");
    if (!seen.insert(n).second) throw Error("duplicate chart coordinate '" + n + "'");
  }
  names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
}

std::optional<std::size_t> Chart::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_->size(); ++i) {
    if ((*names_)[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t Chart::require(std::string_view name) const {
  if (auto i = index_of(name)) return *i;
  throw MissingBinding("coordinate '" + std::string(name) + "' is not in the chart");
}

bool Exponents::divides(const Exponents& other) const {
  for (std::size_t i = 0; i < kMaxChartSize; ++i) {
    if (e[i] > other.e[i]) return false;
  }
  return true;
}

bool grlex_greater(const Exponents& a, const Exponents& b) {
  if (a.total != b.total) return a.total > b.total;
  for (std::size_t i = 0; i < kMaxChartSize; ++i) {
    if (a.e[i] != b.e[i]) return a.e[i] > b.e[i];
  }
  return false;
}

namespace {

void require_same_chart(const Chart& a, const Chart& b) {
  if (!(a == b)) throw ChartMismatch("operands live on different charts");
}

Exponents add_exps(const Exponents& a, const Exponents& b) {
  Exponents r;
  for (std::size_t i = 0; i < kMaxChartSize; ++i) r.e[i] = a.e[i] + b.e[i];
  r.total = a.total + b.total;
  return r;
}

Exponents sub_exps(const Exponents& a, const Exponents& b) {
  Exponents r;
  for (std::size_t i = 0; i < kMaxChartSize; ++i) r.e[i] = a.e[i] - b.e[i];
  r.total = a.total - b.total;
  return r;
}

// Merges sorted term lists a + sign * b.
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b, int sign) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && grlex_greater(a[i].exps, b[j].exps))) {
      out.push_back(a[i++]);
    } else if (i == a.size() || grlex_greater(b[j].exps, a[i].exps)) {
      out.push_back(b[j++]);
      if (sign < 0) out.back().coeff = -out.back().coeff;
    } else {
      mpq_class c = sign < 0 ? mpq_class(a[i].coeff - b[j].coeff) : mpq_class(a[i].coeff + b[j].coeff);
      if (sgn(c) != 0) out.push_back(Term{a[i].exps, std::move(c)});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Poly::Poly(Chart chart) : chart_(std::move(chart)) {}

Poly::Poly(Chart chart, const mpq_class& constant) : chart_(std::move(chart)) {
  if (sgn(constant) != 0) terms_.push_back(Term{Exponents{}, constant});
}

Poly Poly::variable(const Chart& chart, std::size_t index) {
  Poly p(chart);
  Term t{Exponents{}, mpq_class(1)};
  t.exps.set(index, 1);
  p.terms_.push_back(std::move(t));
  return p;
}

Poly Poly::from_terms(Chart chart, std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return grlex_greater(a.exps, b.exps); });
  Poly p(std::move(chart));
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().exps == t.exps) {
      p.terms_.back().coeff += t.coeff;
      if (sgn(p.terms_.back().coeff) == 0) p.terms_.pop_back();
    } else if (sgn(t.coeff) != 0) {
      p.terms_.push_back(std::move(t));
    }
  }
  return p;
}

bool Poly::is_constant() const noexcept {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exps.total == 0);
}

bool Poly::is_integral() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.coeff.get_den() == 1; });
}

mpq_class Poly::constant_value() const {
  if (terms_.empty()) return 0;
  return terms_.back().exps.total == 0 ? terms_.back().coeff : mpq_class(0);
}

std::uint32_t Poly::total_degree() const { return terms_.empty() ? 0 : terms_.front().exps.total; }

std::uint16_t Poly::degree_in(std::size_t var) const {
  std::uint16_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.exps[var]);
  return d;
}

Poly Poly::coeff_in(std::size_t var, std::uint16_t power) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exps[var] == power) {
      Term c = t;
      c.exps.set(var, 0);
      out.push_back(std::move(c));
    }
  }
  // Dropping one variable preserves relative grlex order only when the
  // dropped exponent is constant, which it is here.
  Poly p(chart_);
  p.terms_ = std::move(out);
  return p;
}

Exponents Poly::min_exponents() const {
  if (terms_.empty()) return Exponents{};
  Exponents m = terms_.front().exps;
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < chart_.size(); ++i) m.e[i] = std::min(m.e[i], t.exps.e[i]);
  }
  m.total = 0;
  for (std::size_t i = 0; i < chart_.size(); ++i) m.total += m.e[i];
  return m;
}

std::uint32_t Poly::support() const {
  std::uint32_t mask = 0;
  for (const auto& t : terms_) {
    for (std::size_t i = 0; i < chart_.size(); ++i) {
      if (t.exps.e[i] != 0) mask |= (1u << i);
    }
  }
  return mask;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

Poly& Poly::operator+=(const Poly& other) {
  require_same_chart(chart_, other.chart_);
  terms_ = merge(terms_, other.terms_, +1);
  return *this;
}

Poly& Poly::operator-=(const Poly& other) {
  require_same_chart(chart_, other.chart_);
  terms_ = merge(terms_, other.terms_, -1);
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  require_same_chart(a.chart_, b.chart_);
  if (a.is_zero() || b.is_zero()) return Poly(a.chart_);
  if (a.terms_.size() == 1) return b.shifted(a.terms_[0].exps).scaled(a.terms_[0].coeff);
  if (b.terms_.size() == 1) return a.shifted(b.terms_[0].exps).scaled(b.terms_[0].coeff);
  // Accumulate row by row; each row b * (single term of a) is already sorted.
  const Poly& small = a.size() <= b.size() ? a : b;
  const Poly& large = a.size() <= b.size() ? b : a;
  std::vector<Term> acc;
  std::vector<Term> row;
  for (const auto& t : small.terms_) {
    row.clear();
    row.reserve(large.terms_.size());
    for (const auto& u : large.terms_) {
      row.push_back(Term{add_exps(t.exps, u.exps), t.coeff * u.coeff});
    }
    acc = merge(acc, row, +1);
  }
  Poly p(a.chart_);
  p.terms_ = std::move(acc);
  return p;
}

Poly Poly::scaled(const mpq_class& factor) const {
  if (sgn(factor) == 0) return Poly(chart_);
  Poly p = *this;
  for (auto& t : p.terms_) t.coeff *= factor;
  return p;
}

Poly Poly::shifted(const Exponents& exps) const {
  Poly p = *this;
  for (auto& t : p.terms_) t.exps = add_exps(t.exps, exps);
  return p;
}

Poly Poly::unshifted(const Exponents& exps) const {
  Poly p = *this;
  for (auto& t : p.terms_) t.exps = sub_exps(t.exps, exps);
  return p;
}

Poly Poly::pow(unsigned n) const {
  Poly result(chart_, 1);
  Poly base = *this;
  while (n != 0) {
    if (n & 1u) result = result * base;
    n >>= 1;
    if (n != 0) base = base * base;
  }
  return result;
}

std::optional<Poly> Poly::exact_div(const Poly& divisor) const {
  require_same_chart(chart_, divisor.chart_);
  if (divisor.is_zero()) throw DivisionByZero("polynomial division by zero");
  if (is_zero()) return Poly(chart_);
  if (divisor.is_monomial()) {
    const Term& d = divisor.terms_[0];
    for (const auto& t : terms_) {
      if (!d.exps.divides(t.exps)) return std::nullopt;
    }
    return unshifted(d.exps).scaled(1 / d.coeff);
  }
  const Term& lead = divisor.leading_term();
  mpq_class inv_lead = 1 / lead.coeff;
  std::vector<Term> quotient;
  Poly rem = *this;
  while (!rem.is_zero()) {
    const Term& r = rem.leading_term();
    if (!lead.exps.divides(r.exps)) return std::nullopt;
    // Degree bookkeeping: a non-multiple eventually exposes a leading term
    // not divisible by the divisor's, or a remainder of lower degree.
    if (r.exps.total < lead.exps.total) return std::nullopt;
    Term q{sub_exps(r.exps, lead.exps), r.coeff * inv_lead};
    Poly step = divisor.shifted(q.exps).scaled(q.coeff);
    quotient.push_back(std::move(q));
    rem -= step;
  }
  Poly p(chart_);
  p.terms_ = std::move(quotient);  // generated in decreasing order
  return p;
}

Poly Poly::derivative(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.exps[var] == 0) continue;
    Term d = t;
    d.coeff *= t.exps[var];
    d.exps.set(var, t.exps[var] - 1);
    out.push_back(std::move(d));
  }
  return from_terms(chart_, std::move(out));
}

Poly Poly::embed(const Chart& target) const {
  if (target == chart_) return *this;
  std::vector<std::size_t> map(chart_.size());
  const std::uint32_t used = support();
  for (std::size_t i = 0; i < chart_.size(); ++i) {
    auto j = target.index_of(chart_.name(i));
    if (!j) {
      if (used & (1u << i)) {
        throw ChartMismatch("coordinate '" + chart_.name(i) + "' has no counterpart in target chart");
      }
      map[i] = kMaxChartSize;
    } else {
      map[i] = *j;
    }
  }
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Term u{Exponents{}, t.coeff};
    for (std::size_t i = 0; i < chart_.size(); ++i) {
      if (t.exps[i] != 0) u.exps.set(map[i], t.exps[i]);
    }
    out.push_back(std::move(u));
  }
  return from_terms(target, std::move(out));
}

mpq_class Poly::content() const {
  if (terms_.empty()) return 0;
  mpz_class num = 0, den = 1;
  for (const auto& t : terms_) {
    num = gcd(num, mpz_class(t.coeff.get_num()));
    den = lcm(den, mpz_class(t.coeff.get_den()));
  }
  return mpq_class(num, den);
}

mpq_class Poly::make_primitive() {
  if (terms_.empty()) return 1;
  mpq_class c = content();
  if (sgn(terms_.front().coeff) < 0) c = -c;
  mpq_class factor = 1 / c;
  for (auto& t : terms_) t.coeff *= factor;
  return factor;
}

mpq_class Poly::eval(std::span<const mpq_class> point) const {
  if (point.size() != chart_.size()) throw Error("evaluation point has wrong dimension");
  mpq_class sum = 0;
  std::vector<std::vector<mpq_class>> powers(chart_.size());
  for (const auto& t : terms_) {
    mpq_class v = t.coeff;
    for (std::size_t i = 0; i < chart_.size(); ++i) {
      std::uint16_t k = t.exps[i];
      if (k == 0) continue;
      auto& cache = powers[i];
      if (cache.empty()) cache.push_back(1);
      while (cache.size() <= k) cache.push_back(cache.back() * point[i]);
      v *= cache[k];
    }
    sum += v;
  }
  return sum;
}

double Poly::eval(std::span<const double> point) const {
  if (point.size() != chart_.size()) throw Error("evaluation point has wrong dimension");
  double sum = 0;
  for (const auto& t : terms_) {
    double v = t.coeff.get_d();
    for (std::size_t i = 0; i < chart_.size(); ++i) {
      for (std::uint16_t k = 0; k < t.exps[i]; ++k) v *= point[i];
    }
    sum += v;
  }
  return sum;
}

bool operator==(const Poly& a, const Poly& b) {
  if (!(a.chart_ == b.chart_) || a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].exps == b.terms_[i].exps) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

}  // namespace sym
}  // namespace jetflat
