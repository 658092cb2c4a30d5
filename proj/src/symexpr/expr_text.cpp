#include "jetflat/symexpr.hpp"

#include <cctype>
#include <sstream>

namespace jetflat::sym {

namespace {

class Parser {
public:
  Parser(std::string_view text, const Chart& chart) : text_(text), chart_(chart) {}

  RatFunc run() {
    RatFunc r = expr();
    skip_space();
    if (pos_ != text_.size()) throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return r;
  }

private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  RatFunc expr() {
    RatFunc acc = term();
    while (true) {
      if (accept('+')) {
        acc += term();
      } else if (accept('-')) {
        acc -= term();
      } else {
        return acc;
      }
    }
  }

  RatFunc term() {
    RatFunc acc = unary();
    while (true) {
      if (accept('*')) {
        acc *= unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        RatFunc d = unary();
        if (d.is_zero()) throw DivisionByZero("division by zero polynomial at position " + std::to_string(at));
        acc /= d;
      } else {
        return acc;
      }
    }
  }

  RatFunc unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  RatFunc power() {
    RatFunc base = primary();
    while (accept('^')) {
      skip_space();
      const std::size_t at = pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        throw ParseError("expected a nonnegative integer exponent", at);
      }
      mpz_class e = integer();
      if (e > 65535) throw ParseError("exponent too large", at);
      base = base.pow(static_cast<int>(e.get_si()));
    }
    return base;
  }

  mpz_class integer() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return mpz_class(std::string(text_.substr(start, pos_ - start)));
  }

  RatFunc primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      RatFunc r = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return r;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      return RatFunc(chart_, mpq_class(integer()));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        ++pos_;
      }
      std::string name(text_.substr(start, pos_ - start));
      if (!chart_.contains(name)) throw UnknownIdentifier(name, start);
      return RatFunc::variable(chart_, name);
    }
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  std::string_view text_;
  const Chart& chart_;
  std::size_t pos_ = 0;
};

std::string coeff_text(const mpq_class& c) {
  return c.get_den() == 1 ? c.get_num().get_str() : c.get_num().get_str() + "/" + c.get_den().get_str();
}

std::string monomial_text(const Exponents& e, const Chart& chart) {
  std::string out;
  for (std::size_t i = 0; i < chart.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += chart.name(i);
    if (e[i] > 1) out += "^" + std::to_string(e[i]);
  }
  return out;
}

// A product that needs no parentheses as a divisor: an integer or a single
// variable power with unit coefficient.
bool atomic_divisor(const Poly& p) {
  if (p.is_constant()) return p.constant_value().get_den() == 1 && p.constant_value() > 0;
  if (!p.is_monomial() || p.leading_term().coeff != 1) return false;
  const std::uint32_t s = p.support();
  return (s & (s - 1)) == 0;
}

}  // namespace

RatFunc parse(std::string_view text, const Chart& chart) { return Parser(text, chart).run(); }

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : p.terms()) {
    mpq_class c = t.coeff;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    c = abs(c);
    std::string mono = monomial_text(t.exps, p.chart());
    if (mono.empty()) {
      out += coeff_text(c);
    } else if (c == 1) {
      out += mono;
    } else {
      out += coeff_text(c) + "*" + mono;
    }
  }
  return out;
}

std::ostream& operator<<(std::ostream& os, const RatFunc& f) { return os << to_string(f); }

std::string to_string(const RatFunc& f) {
  std::string num = to_string(f.num());
  if (f.den().is_constant() && f.den().constant_value() == 1) return num;
  if (f.num().size() > 1) num = "(" + num + ")";
  std::string den = to_string(f.den());
  if (!atomic_divisor(f.den())) den = "(" + den + ")";
  return num + "/" + den;
}

}  // namespace jetflat::sym
