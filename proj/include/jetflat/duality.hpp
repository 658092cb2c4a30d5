#pragma once

// Dual equations of a system given by a 3-parameter solution family, and the
// projections of the flat model onto the coordinate and solution spaces.

#include <array>
#include <optional>
#include <string_view>

#include "jetflat/symexpr.hpp"

namespace jetflat::dual {

using sym::Chart;
using sym::RatFunc;

/// (x1, x2, X1, X2, Y): the chart of a solution family y = h(x, X, Y).
const Chart& family_chart();
/// (X1, X2, Y, Z1, Z2): the jet chart of the solution space.
const Chart& solution_chart();
/// (x1, x2, X1, X2, Y, Z1, Z2): where dual expressions live before x is eliminated.
const Chart& dual_chart();

/// x1, x2 written in terms of the solution-space jet coordinates.
struct Inverse {
  RatFunc x1, x2;
};

class SolutionFamily {
public:
  /// Throws Error when h_Y vanishes identically or the inverse fails
  /// Z_i + h_{X_i}/h_Y = 0 after substitution.
  explicit SolutionFamily(RatFunc h, std::optional<Inverse> inverse = std::nullopt);
  static SolutionFamily parse(std::string_view h, std::optional<std::array<std::string_view, 2>> inverse = {});

  const RatFunc& h() const noexcept { return h_; }
  const std::optional<Inverse>& inverse() const noexcept { return inverse_; }

private:
  RatFunc h_;
  std::optional<Inverse> inverse_;
};

struct DualPDE {
  /// Over solution_chart() when x has been eliminated, else over dual_chart().
  RatFunc F11, F12, F22;
  /// True when x1 or x2 remain and no inverse was supplied.
  bool open;
};

/// F_ij = (h_{X_i} h_{Y X_j} - h_Y h_{X_i X_j} + Z_j (h_{X_i} h_{YY} - h_Y h_{X_i Y})) / h_Y^2.
DualPDE dual_pde(const SolutionFamily& family);

using Point3 = std::array<mpq_class, 3>;
using Point5 = std::array<mpq_class, 5>;

/// π1 = (x1, x2, y), π2 = (z1, z2, y - z1 x1 - z2 x2).
std::pair<Point3, Point3> flat_projections(const Point5& p);

/// Checks y = a x1 + b x2 + c with (a, b, c) = π2 as an identity over (x1, x2, y, z1, z2).
bool incidence_identity();

/// The leaf π2⁻¹(a, b, c) = {(x1, x2, a x1 + b x2 + c, a, b)}, parametrized by (x1, x2).
struct Leaf {
  mpq_class a, b, c;

  static constexpr int dimension = 2;
  Point5 point(const mpq_class& s1, const mpq_class& s2) const;
  /// Parametrization over the chart (x1, x2, y, z1, z2) using only x1, x2.
  std::array<RatFunc, 5> parametrization() const;
};

Leaf fiber_of_solution(const mpq_class& a, const mpq_class& b, const mpq_class& c);

}  // namespace jetflat::dual
