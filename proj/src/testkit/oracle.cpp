#include "jetflat/testkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace jetflat::testkit {

namespace {

using Point = std::vector<mpq_class>;

class Oracle {
public:
  Oracle(const jet::PDESystem& sys, mpq_class step) : sys_(sys), step_(std::move(step)) {}

  mpq_class value(const curv::Factor& f, std::span<const curv::Dir> path, const Point& p) const {
    if (path.empty()) return source(f.source, p);
    const Point X = field(path.back(), p);
    Point plus = p, minus = p;
    for (std::size_t i = 0; i < p.size(); ++i) {
      plus[i] += step_ * X[i];
      minus[i] -= step_ * X[i];
    }
    const auto inner = path.first(path.size() - 1);
    return (value(f, inner, plus) - value(f, inner, minus)) / (2 * step_);
  }

private:
  mpq_class source(curv::Source s, const Point& p) const {
    switch (s) {
      case curv::Source::f11: return sym::eval(sys_.f11, p);
      case curv::Source::f12: return sym::eval(sys_.f12, p);
      case curv::Source::f22: return sym::eval(sys_.f22, p);
      case curv::Source::z1: return p[3];
      case curv::Source::z2: return p[4];
    }
    return 0;
  }

  Point field(curv::Dir dir, const Point& p) const {
    Point X(5, mpq_class(0));
    switch (dir) {
      case curv::Dir::x1: X[0] = 1; break;
      case curv::Dir::x2: X[1] = 1; break;
      case curv::Dir::theta0: X[2] = 1; break;
      case curv::Dir::theta1: X[3] = 1; break;
      case curv::Dir::theta2: X[4] = 1; break;
      case curv::Dir::omega1: X = {1, 0, p[3], sym::eval(sys_.f11, p), sym::eval(sys_.f12, p)}; break;
      case curv::Dir::omega2: X = {0, 1, p[4], sym::eval(sys_.f12, p), sym::eval(sys_.f22, p)}; break;
    }
    return X;
  }

  const jet::PDESystem& sys_;
  mpq_class step_;
};

}  // namespace

mpq_class finite_difference_base(const curv::Recipe& recipe, const jet::PDESystem& sys,
                                 std::span<const mpq_class> point, const mpq_class& step) {
  const Oracle oracle(sys, step);
  const Point p(point.begin(), point.end());
  mpq_class sum = 0;
  for (const curv::Product& term : recipe.terms) {
    mpq_class prod = term.coefficient;
    for (const curv::Factor& f : term.factors) prod *= oracle.value(f, f.path, p);
    sum += prod;
  }
  return sum;
}

double relative_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

}  // namespace jetflat::testkit
