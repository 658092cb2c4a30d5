#include "jetflat/exterior.hpp"

#include <bit>

namespace jetflat::ext {

using Mask = DiffForm::Mask;

namespace {

void require_same_chart(const Chart& a, const Chart& b) {
  if (!(a == b)) throw ChartMismatch("forms live on different charts");
}

// Number of set bits of m strictly below bit i.
int bits_below(Mask m, std::size_t i) { return std::popcount(m & ((Mask{1} << i) - 1)); }

}  // namespace

VectorField::VectorField(Chart chart) : chart_(chart), components_(chart.size(), RatFunc(chart)) {}

VectorField::VectorField(Chart chart, std::vector<RatFunc> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
  if (components_.size() != chart_.size()) throw Error("vector field needs one component per coordinate");
  for (const auto& c : components_) require_same_chart(c.chart(), chart_);
}

RatFunc VectorField::apply(const RatFunc& f) const {
  require_same_chart(f.chart(), chart_);
  RatFunc out(chart_);
  for (std::size_t i = 0; i < chart_.size(); ++i) {
    if (components_[i].is_zero() || !f.depends_on(chart_.name(i))) continue;
    out += components_[i] * sym::derive(f, i);
  }
  return out;
}

DiffForm::DiffForm(Chart chart, unsigned degree) : chart_(std::move(chart)), degree_(degree) {}

DiffForm DiffForm::function(const RatFunc& f) {
  DiffForm w(f.chart(), 0);
  w.add_term(0, f);
  return w;
}

DiffForm DiffForm::differential(const Chart& chart, std::string_view name) {
  return term(RatFunc(chart, 1), Mask{1} << chart.require(name));
}

DiffForm DiffForm::term(const RatFunc& f, Mask mask) {
  DiffForm w(f.chart(), static_cast<unsigned>(std::popcount(mask)));
  if (mask >> f.chart().size()) throw Error("differential index outside the chart");
  w.add_term(mask, f);
  return w;
}

DiffForm DiffForm::one_form(const Chart& chart, const std::vector<RatFunc>& coefficients) {
  if (coefficients.size() != chart.size()) throw Error("one_form needs one coefficient per coordinate");
  DiffForm w(chart, 1);
  for (std::size_t i = 0; i < coefficients.size(); ++i) w.add_term(Mask{1} << i, coefficients[i]);
  return w;
}

void DiffForm::add_term(Mask mask, const RatFunc& f) {
  require_same_chart(f.chart(), chart_);
  if (f.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mask, f);
  if (!inserted) {
    it->second += f;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

RatFunc DiffForm::coefficient(Mask mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? RatFunc(chart_) : it->second;
}

DiffForm DiffForm::operator-() const {
  DiffForm w = *this;
  for (auto& [m, f] : w.terms_) f = -f;
  return w;
}

DiffForm& DiffForm::operator+=(const DiffForm& other) {
  require_same_chart(chart_, other.chart_);
  if (other.degree_ != degree_ && !other.is_zero() && !is_zero()) {
    throw Error("cannot add forms of different degree");
  }
  if (is_zero()) degree_ = other.degree_;
  for (const auto& [m, f] : other.terms_) add_term(m, f);
  return *this;
}

DiffForm& DiffForm::operator-=(const DiffForm& other) { return *this += -other; }

DiffForm operator*(const RatFunc& f, const DiffForm& w) {
  require_same_chart(f.chart(), w.chart_);
  DiffForm out(w.chart_, w.degree_);
  if (f.is_zero()) return out;
  for (const auto& [m, g] : w.terms_) out.terms_.emplace(m, f * g);
  return out;
}

bool operator==(const DiffForm& a, const DiffForm& b) {
  if (!(a.chart_ == b.chart_)) return false;
  if (a.is_zero() && b.is_zero()) return true;
  return a.degree_ == b.degree_ && a.terms_ == b.terms_;
}

int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  // Each differential of b moves past the elements of a with larger index.
  int swaps = 0;
  for (Mask m = b; m != 0; m &= m - 1) {
    const std::size_t j = static_cast<std::size_t>(std::countr_zero(m));
    swaps += std::popcount(a >> j);
  }
  return (swaps & 1) ? -1 : 1;
}

DiffForm wedge(const DiffForm& a, const DiffForm& b) {
  require_same_chart(a.chart(), b.chart());
  DiffForm out(a.chart(), a.degree() + b.degree());
  for (const auto& [ma, fa] : a.terms()) {
    for (const auto& [mb, fb] : b.terms()) {
      const int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      RatFunc c = fa * fb;
      out += DiffForm::term(s > 0 ? c : -c, ma | mb);
    }
  }
  return out;
}

DiffForm d(const DiffForm& w) {
  DiffForm out(w.chart(), w.degree() + 1);
  const Chart& chart = w.chart();
  for (const auto& [m, f] : w.terms()) {
    for (std::size_t u = 0; u < chart.size(); ++u) {
      if ((m >> u) & 1u) continue;
      if (!f.depends_on(chart.name(u))) continue;
      const int s = wedge_sign(Mask{1} << u, m);
      RatFunc c = sym::derive(f, u);
      out += DiffForm::term(s > 0 ? c : -c, m | (Mask{1} << u));
    }
  }
  return out;
}

DiffForm interior(const VectorField& x, const DiffForm& w) {
  require_same_chart(x.chart(), w.chart());
  if (w.degree() == 0) return DiffForm(w.chart(), 0);
  DiffForm out(w.chart(), w.degree() - 1);
  for (const auto& [m, f] : w.terms()) {
    for (Mask r = m; r != 0; r &= r - 1) {
      const std::size_t j = static_cast<std::size_t>(std::countr_zero(r));
      if (x[j].is_zero()) continue;
      RatFunc c = x[j] * f;
      if (bits_below(m, j) & 1) c = -c;
      out += DiffForm::term(c, m & ~(Mask{1} << j));
    }
  }
  return out;
}

namespace {

// Replaces dx_p by the 1-form `rule` throughout w.
DiffForm eliminate(const DiffForm& w, std::size_t p, const DiffForm& rule) {
  const Mask bit = Mask{1} << p;
  DiffForm out(w.chart(), w.degree());
  for (const auto& [m, f] : w.terms()) {
    if (!(m & bit)) {
      out += DiffForm::term(f, m);
      continue;
    }
    // f dx_I = ± f dx_p ∧ dx_{I \ p}
    RatFunc c = (bits_below(m, p) & 1) ? -f : f;
    out += wedge(c * rule, DiffForm::term(RatFunc(w.chart(), 1), m & ~bit));
  }
  return out;
}

}  // namespace

DiffForm reduce_mod(const DiffForm& w, const std::vector<DiffForm>& ideal) {
  std::vector<std::pair<std::size_t, DiffForm>> rules;
  for (const auto& g0 : ideal) {
    require_same_chart(g0.chart(), w.chart());
    if (g0.degree() != 1 && !g0.is_zero()) throw Error("reduce_mod needs an ideal of 1-forms");
    DiffForm g = g0;
    for (const auto& [p, rule] : rules) g = eliminate(g, p, rule);
    if (g.is_zero()) throw Error("ideal form is dependent on the earlier ones and cannot be solved");
    const Mask top = std::prev(g.terms().end())->first;
    const std::size_t p = static_cast<std::size_t>(std::countr_zero(top));
    const RatFunc lead = g.coefficient(top);
    // dx_p = -(1/lead) * (g - lead dx_p)
    DiffForm rule = (RatFunc(w.chart(), -1) / lead) * (g - DiffForm::term(lead, top));
    for (auto& [q, r] : rules) r = eliminate(r, p, rule);
    rules.emplace_back(p, rule);
  }
  DiffForm out = w;
  for (const auto& [p, rule] : rules) out = eliminate(out, p, rule);
  return out;
}

DiffForm pullback(const DiffForm& w, const sym::Bindings& map, const Chart& source) {
  const Chart& target = w.chart();
  std::map<std::size_t, DiffForm> dphi;
  const auto differential_of = [&](std::size_t i) -> const DiffForm& {
    auto cached = dphi.find(i);
    if (cached != dphi.end()) return cached->second;
    auto it = map.find(target.name(i));
    if (it == map.end()) throw MissingBinding("no binding for coordinate '" + target.name(i) + "'");
    return dphi.emplace(i, d(DiffForm::function(it->second))).first->second;
  };
  DiffForm out(source, w.degree());
  for (const auto& [m, f] : w.terms()) {
    DiffForm piece = DiffForm::function(sym::substitute(f, map));
    for (Mask r = m; r != 0; r &= r - 1) {
      const std::size_t j = static_cast<std::size_t>(std::countr_zero(r));
      piece = wedge(piece, differential_of(j));
    }
    out += piece;
  }
  return out;
}

namespace {

// Inverse of a square matrix of rational functions by Gauss-Jordan.
std::vector<std::vector<RatFunc>> invert(std::vector<std::vector<RatFunc>> a) {
  const std::size_t n = a.size();
  const Chart chart = a[0][0].chart();
  std::vector<std::vector<RatFunc>> inv(n, std::vector<RatFunc>(n, RatFunc(chart)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = RatFunc(chart, 1);
  for (std::size_t col = 0; col < n; ++col) {
    // Prefer constant pivots to keep entries small.
    std::size_t piv = n;
    for (std::size_t r = col; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      if (piv == n || (a[r][col].is_constant() && !a[piv][col].is_constant())) piv = r;
    }
    if (piv == n) throw Error("coframe is singular");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    const RatFunc p = a[col][col];
    if (!(p.is_constant() && p.constant_value() == 1)) {
      RatFunc ip = RatFunc(chart, 1) / p;
      for (auto& v : a[col]) v *= ip;
      for (auto& v : inv[col]) v *= ip;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      const RatFunc f = a[r][col];
      for (std::size_t k = 0; k < n; ++k) {
        if (!a[col][k].is_zero()) a[r][k] -= f * a[col][k];
        if (!inv[col][k].is_zero()) inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

}  // namespace

std::vector<VectorField> dual_basis(const std::vector<DiffForm>& coframe) {
  if (coframe.empty()) throw Error("empty coframe");
  const Chart& chart = coframe[0].chart();
  const std::size_t n = chart.size();
  if (coframe.size() != n) throw Error("coframe size must equal the chart dimension");
  // E[i][u] = coefficient of dx_u in e_i; dual fields are the columns of E^{-1}.
  std::vector<std::vector<RatFunc>> e(n, std::vector<RatFunc>(n, RatFunc(chart)));
  for (std::size_t i = 0; i < n; ++i) {
    require_same_chart(coframe[i].chart(), chart);
    if (coframe[i].degree() != 1 && !coframe[i].is_zero()) throw Error("coframe entries must be 1-forms");
    for (std::size_t u = 0; u < n; ++u) e[i][u] = coframe[i].component(u);
  }
  auto inv = invert(std::move(e));
  std::vector<VectorField> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<RatFunc> comps;
    for (std::size_t u = 0; u < n; ++u) comps.push_back(inv[u][i]);
    out.emplace_back(chart, std::move(comps));
  }
  return out;
}

std::map<Mask, RatFunc> frame_components(const DiffForm& w, const std::vector<DiffForm>& coframe) {
  std::map<Mask, RatFunc> out;
  if (w.is_zero()) return out;
  const auto duals = dual_basis(coframe);
  const std::size_t n = duals.size();
  const unsigned k = w.degree();
  if (k == 0) {
    out.emplace(0, w.coefficient(0));
    return out;
  }
  // Depth-first over increasing index tuples, contracting as we go.
  struct Frame {
    std::size_t next;
    Mask mask;
    DiffForm form;
  };
  std::vector<Frame> stack{{0, 0, w}};
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.form.is_zero()) continue;
    if (static_cast<unsigned>(std::popcount(f.mask)) == k) {
      RatFunc c = f.form.coefficient(0);
      if (!c.is_zero()) out.emplace(f.mask, c);
      continue;
    }
    for (std::size_t i = f.next; i < n; ++i) {
      stack.push_back({i + 1, f.mask | (Mask{1} << i), interior(duals[i], f.form)});
    }
  }
  return out;
}

namespace {

std::string coefficient_text(const RatFunc& c, bool& negative) {
  negative = false;
  RatFunc v = c;
  if (!v.num().is_zero() && sgn(v.num().leading_term().coeff) < 0) {
    negative = true;
    v = -v;
  }
  if (v.is_constant() && v.constant_value() == 1) return "";
  std::string s = sym::to_string(v);
  const bool simple = v.num().size() == 1 && v.is_polynomial();
  return (simple ? s : "(" + s + ")") + "*";
}

std::string join_terms(const std::vector<std::pair<std::string, RatFunc>>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    bool neg = false;
    std::string coeff = coefficient_text(terms[i].second, neg);
    std::string body = terms[i].first;
    if (body.empty()) {
      body = coeff.empty() ? "1" : coeff.substr(0, coeff.size() - 1);
      coeff.clear();
    }
    if (i == 0) {
      out += neg ? "-" : "";
    } else {
      out += neg ? " - " : " + ";
    }
    out += coeff + body;
  }
  return out;
}

std::string mask_text(Mask m, const std::vector<std::string>& labels) {
  std::string out;
  for (Mask r = m; r != 0; r &= r - 1) {
    if (!out.empty()) out += "∧";
    out += labels[static_cast<std::size_t>(std::countr_zero(r))];
  }
  return out;
}

}  // namespace

std::string to_string(const DiffForm& w) {
  std::vector<std::string> labels;
  for (const auto& n : w.chart().names()) labels.push_back("d" + n);
  std::vector<std::pair<std::string, RatFunc>> terms;
  for (const auto& [m, f] : w.terms()) terms.emplace_back(mask_text(m, labels), f);
  return join_terms(terms);
}

std::string to_string(const DiffForm& w, const std::vector<DiffForm>& coframe,
                      const std::vector<std::string>& labels) {
  if (labels.size() != coframe.size()) throw Error("one label per coframe element is required");
  std::vector<std::pair<std::string, RatFunc>> terms;
  for (const auto& [m, f] : frame_components(w, coframe)) terms.emplace_back(mask_text(m, labels), f);
  return join_terms(terms);
}

}  // namespace jetflat::ext
