#pragma once

// Exact multivariate rational functions over Q on a named coordinate chart.
//
// Every value is kept in a canonical form so that equality of two RatFunc
// objects is structural equality, and is_zero is an exact decision:
//   - numerator and denominator have integer coefficients,
//   - they share no common polynomial factor and no common integer factor,
//   - the leading coefficient of the denominator (graded lex order over the
//     chart order) is positive.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace jetflat {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t position);
  std::size_t position() const noexcept { return position_; }

private:
  std::size_t position_;
};

class UnknownIdentifier : public ParseError {
public:
  UnknownIdentifier(const std::string& name, std::size_t position);
  const std::string& name() const noexcept { return name_; }

private:
  std::string name_;
};

class DivisionByZero : public Error {
public:
  using Error::Error;
};

class ChartMismatch : public Error {
public:
  using Error::Error;
};

class PoleError : public Error {
public:
  using Error::Error;
};

class MissingBinding : public Error {
public:
  using Error::Error;
};

namespace sym {

inline constexpr std::size_t kMaxChartSize = 16;

/// Ordered list of distinct coordinate names. Cheap to copy; immutable.
class Chart {
public:
  explicit Chart(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_->size(); }
  const std::string& name(std::size_t i) const { return (*names_)[i]; }
  const std::vector<std::string>& names() const noexcept { return *names_; }
  std::optional<std::size_t> index_of(std::string_view name) const;
  /// Like index_of, but throws MissingBinding naming the coordinate.
  std::size_t require(std::string_view name) const;
  bool contains(std::string_view name) const { return index_of(name).has_value(); }

  friend bool operator==(const Chart& a, const Chart& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

/// Exponent vector of a monomial; entries past the chart size are zero.
struct Exponents {
  std::array<std::uint16_t, kMaxChartSize> e{};
  std::uint32_t total = 0;

  std::uint16_t operator[](std::size_t i) const { return e[i]; }
  void set(std::size_t i, std::uint16_t value) {
    total = total - e[i] + value;
    e[i] = value;
  }
  bool divides(const Exponents& other) const;

  friend bool operator==(const Exponents& a, const Exponents& b) { return a.e == b.e; }
};

/// Graded lexicographic comparison: true when a is strictly greater than b.
bool grlex_greater(const Exponents& a, const Exponents& b);

struct Term {
  Exponents exps;
  mpq_class coeff;
};

/// Sparse polynomial with rational coefficients. Terms are stored in strictly
/// decreasing graded-lex order with no zero coefficients, so equal
/// polynomials have identical term lists.
class Poly {
public:
  explicit Poly(Chart chart);
  Poly(Chart chart, const mpq_class& constant);

  static Poly variable(const Chart& chart, std::size_t index);
  /// Builds a polynomial from arbitrary (possibly repeated, unsorted) terms.
  static Poly from_terms(Chart chart, std::vector<Term> terms);

  const Chart& chart() const noexcept { return chart_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_constant() const noexcept;
  bool is_monomial() const noexcept { return terms_.size() == 1; }
  bool is_integral() const;
  /// Constant value; only meaningful when is_constant().
  mpq_class constant_value() const;
  const Term& leading_term() const { return terms_.front(); }

  std::uint32_t total_degree() const;
  std::uint16_t degree_in(std::size_t var) const;
  /// Coefficient of var^power as a polynomial free of var.
  Poly coeff_in(std::size_t var, std::uint16_t power) const;
  /// Componentwise minimum exponent over all terms.
  Exponents min_exponents() const;
  /// Bitmask of variables that occur.
  std::uint32_t support() const;

  Poly operator-() const;
  Poly& operator+=(const Poly& other);
  Poly& operator-=(const Poly& other);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly scaled(const mpq_class& factor) const;
  /// Multiplies by the monomial with the given exponents.
  Poly shifted(const Exponents& exps) const;
  /// Divides by the monomial with the given exponents; it must divide every term.
  Poly unshifted(const Exponents& exps) const;
  Poly pow(unsigned n) const;

  /// Exact quotient this / divisor, or nullopt when divisor does not divide.
  std::optional<Poly> exact_div(const Poly& divisor) const;
  Poly derivative(std::size_t var) const;

  /// Same polynomial written over a chart that contains every used name.
  Poly embed(const Chart& target) const;

  /// Rational multiple making every coefficient an integer with gcd 1 and a
  /// positive leading coefficient. Returns the factor that was applied.
  mpq_class make_primitive();
  /// gcd of the numerators over lcm of the denominators of the coefficients.
  mpq_class content() const;

  mpq_class eval(std::span<const mpq_class> point) const;
  double eval(std::span<const double> point) const;

  friend bool operator==(const Poly& a, const Poly& b);

private:
  Chart chart_;
  std::vector<Term> terms_;
};

/// Greatest common divisor of two integral polynomials, normalized to be
/// primitive with positive leading coefficient. gcd(0, 0) is 0.
Poly gcd(const Poly& a, const Poly& b);

/// Canonical exact rational function num/den.
class RatFunc {
public:
  explicit RatFunc(Chart chart);
  RatFunc(Chart chart, const mpq_class& constant);
  explicit RatFunc(const Poly& num);
  /// Canonicalizes num/den. Throws DivisionByZero when den is zero.
  RatFunc(const Poly& num, const Poly& den);

  static RatFunc variable(const Chart& chart, std::string_view name);

  const Chart& chart() const noexcept { return num_.chart(); }
  const Poly& num() const noexcept { return num_; }
  const Poly& den() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_constant() const noexcept { return num_.is_constant() && den_.is_constant(); }
  bool is_polynomial() const noexcept { return den_.is_constant(); }
  /// Only meaningful when is_constant().
  mpq_class constant_value() const;

  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& other);
  RatFunc& operator-=(const RatFunc& other);
  RatFunc& operator*=(const RatFunc& other);
  RatFunc& operator/=(const RatFunc& other);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  RatFunc scaled(const mpq_class& factor) const;
  RatFunc pow(int n) const;

  /// True when the coordinate actually occurs in num or den.
  bool depends_on(std::string_view name) const;

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.chart() == b.chart() && a.num_ == b.num_ && a.den_ == b.den_;
  }

private:
  RatFunc(Poly num, Poly den, bool already_canonical);
  void canonicalize();
  RatFunc normalized_sign() const;

  Poly num_;
  Poly den_;
};

/// Parses an expression in the grammar
///   expr    := term (('+'|'-') term)*
///   term    := unary (('*'|'/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' integer)*
///   primary := integer | identifier | '(' expr ')'
/// so that '^' binds tighter than unary minus, which binds tighter than '*'
/// and '/'. Identifiers must be coordinates of the chart.
RatFunc parse(std::string_view text, const Chart& chart);

/// Deterministic printer emitting the parse grammar.
std::string to_string(const Poly& p);
std::string to_string(const RatFunc& f);
std::ostream& operator<<(std::ostream& os, const RatFunc& f);

enum class ArithOp { add, sub, mul, div, neg };

/// Field arithmetic; for neg the second operand is ignored.
RatFunc arith(ArithOp op, const RatFunc& f, const RatFunc& g);

RatFunc derive(const RatFunc& f, std::string_view var);
RatFunc derive(const RatFunc& f, std::size_t var);

/// Coordinate -> replacement, all replacements over one target chart.
using Bindings = std::map<std::string, RatFunc, std::less<>>;

/// Simultaneous substitution. Every coordinate of f's chart needs a binding.
RatFunc substitute(const RatFunc& f, const Bindings& bindings);

/// Identity bindings of every coordinate of `from` into `to` (names must exist
/// in `to`); convenient starting point for partial substitutions.
Bindings identity_bindings(const Chart& from, const Chart& to);

/// Rewrites f over a chart containing all of f's coordinate names.
RatFunc embed(const RatFunc& f, const Chart& target);

inline bool is_zero(const RatFunc& f) { return f.is_zero(); }

/// Exact evaluation; the point is aligned with the chart. Throws PoleError.
mpq_class eval(const RatFunc& f, std::span<const mpq_class> point);
/// Floating evaluation; throws PoleError when the denominator is exactly 0.
double eval(const RatFunc& f, std::span<const double> point);
/// Evaluation with named values; every coordinate that occurs must be bound.
mpq_class eval(const RatFunc& f, const std::map<std::string, mpq_class, std::less<>>& point);

}  // namespace sym
}  // namespace jetflat
