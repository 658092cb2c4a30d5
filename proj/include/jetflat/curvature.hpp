#pragma once

// Torsions, curvatures and the flatness test for y_{x_i x_j} = f_ij under
// lifts of scale transformations.
//
// Fiber coordinates of the coframe bundle are b, c, e, g, h, with k = ch/g
// eliminated everywhere. Every curvature is a fiber monomial times a base
// function, and since fiber coordinates never vanish it is zero exactly
// when its base is.

#include <array>
#include <map>
#include <string>
#include <vector>

#include "jetflat/exterior.hpp"
#include "jetflat/jetframe.hpp"
#include "jetflat/symexpr.hpp"

namespace jetflat::curv {

using jet::PDESystem;
using sym::Chart;
using sym::RatFunc;

class PreconditionError : public Error {
public:
  using Error::Error;
};

/// (x1, x2, y, z1, z2, b, c, e, g, h).
const Chart& bundle_chart();
/// (x1, x2, y, z1, z2, c, g, h): b and e fixed by the reduction L2 = L4 = 0.
const Chart& reduced_chart();

/// A rational multiple of b^i c^j e^l g^m h^n with integer exponents.
struct FiberMonomial {
  mpq_class coefficient{1};
  /// Exponents of (b, c, e, g, h).
  std::array<int, 5> exps{};

  /// coefficient · c^c g^g h^h k^k with k replaced by ch/g.
  static FiberMonomial make(const mpq_class& coefficient, int c, int g, int h, int k = 0);

  /// The monomial as a function on a chart containing its fiber coordinates.
  RatFunc on(const Chart& chart) const;

  friend bool operator==(const FiberMonomial&, const FiberMonomial&) = default;
};

/// "-c/(g*h)", "1/(c*h^2)", "1".
std::string to_string(const FiberMonomial& m);

struct FiberedScalar {
  FiberMonomial fiber;
  /// Over the base chart.
  RatFunc base;

  bool is_zero() const { return base.is_zero(); }
  /// fiber · base on a bundle chart.
  RatFunc on(const Chart& chart) const;
};

// Curvature formulas are stored as data: sums of products of iterated
// derivatives of f11, f12, f22 (or bare z1, z2), times a fiber prefactor.
// The same tables drive the symbolic evaluation and the numeric oracle.

/// Frame directions, plus coordinate partials in x1 and x2. θ0, θ1, θ2
/// coincide with ∂y, ∂z1, ∂z2.
enum class Dir { theta0, theta1, theta2, omega1, omega2, x1, x2 };

enum class Source { f11, f12, f22, z1, z2 };

struct Factor {
  Source source;
  /// Applied left to right.
  std::vector<Dir> path;
};

struct Product {
  mpq_class coefficient;
  std::vector<Factor> factors;
};

struct Recipe {
  std::string name;
  FiberMonomial prefactor;
  std::vector<Product> terms;
};

/// M1..M13 then S1..S14. M1, M3..M9 and S2..S14 are the frame-derivative
/// forms; M2 and M10..M13 are the coordinate forms written with θ
/// directions; S1 is the form consistent with the {e}-structure equation.
const std::vector<Recipe>& curvature_recipes();
/// S1 exactly as printed in the frame-derivative list.
const Recipe& printed_s1_recipe();
/// The coordinate-form list M1..M13 (f21 read as f12).
const std::vector<Recipe>& coordinate_m_recipes();

/// The fifteen curvatures whose vanishing decides flatness.
const std::vector<std::string>& test_curvature_names();

/// Memoized iterated derivatives of the f_ij of one system.
class DerivativeTable {
public:
  explicit DerivativeTable(PDESystem sys);

  const PDESystem& system() const noexcept { return sys_; }
  const RatFunc& get(const Factor& factor);
  /// The base part Σ coefficient · Π factors.
  RatFunc evaluate(const Recipe& recipe);
  FiberedScalar scalar(const Recipe& recipe) { return {recipe.prefactor, evaluate(recipe)}; }

private:
  PDESystem sys_;
  std::map<std::pair<Source, std::vector<Dir>>, RatFunc> cache_;
};

/// Derivative of a base function in one direction.
RatFunc derive_dir(const PDESystem& sys, const RatFunc& f, Dir dir);

/// T1..T14 over the bundle chart.
std::array<RatFunc, 14> torsions_T(const PDESystem& sys);
/// L1..L6 over the bundle chart.
std::array<RatFunc, 6> torsions_L(const PDESystem& sys);

/// Solution of L2 = L4 = 0 for b and e, over the chart (x1, x2, y, z1, z2, c, g, h).
struct Reduction {
  RatFunc b, e;
};
Reduction solve_reduction(const PDESystem& sys);

struct Curvatures {
  std::vector<FiberedScalar> M;  // M1..M13 at index 0..12
  std::vector<FiberedScalar> S;  // S1..S14 at index 0..13

  /// Lookup by name, e.g. "M5" or "S12".
  const FiberedScalar& operator[](std::string_view name) const;
};

/// Throws PreconditionError unless A = B = 0.
Curvatures curvatures(const PDESystem& sys);

enum class Verdict { NotIntegrable, Flat, NotFlat };
std::string to_string(Verdict v);

/// A cross-check between two presentations of the same quantity.
struct Diagnostic {
  std::string name;
  bool agrees;
  std::string detail;
};

struct CurvatureReport {
  RatFunc A, B;
  /// Empty when the verdict is NotIntegrable.
  std::vector<FiberedScalar> M, S;
  Verdict verdict;
  /// Test curvatures with nonzero base, in the order M1, M3, ..., S14.
  std::vector<std::string> witnesses;
  std::vector<Diagnostic> diagnostics;
};

CurvatureReport flatness(const PDESystem& sys);

struct RelationCheck {
  std::string name;
  bool holds;
};

struct RelationReport {
  /// M4, M9, S3, S4, S7, S10, S13. S10 is checked as (1/c)(M1)_θ1 - 2M3.
  std::vector<RelationCheck> relations;
  /// The S10 relation with the printed sign, -(1/c)(M1)_θ1 + 2M3.
  bool printed_s10_holds;

  bool holds() const;
};

/// Throws PreconditionError unless A = B = 0.
RelationReport verify_prop35(const PDESystem& sys);

enum class Level {
  coframe_bundle,  // tautological forms on the full coframe bundle
  g_structure,     // after the first absorption
  reduced,         // on the reduced bundle, before and after absorption
  e_structure,     // derivatives of the hatted connection forms
};

/// 9, 10, 11 map to the first three levels; "e" to the last.
Level level_from_string(std::string_view s);
std::string to_string(Level level);

struct StructureRow {
  std::string name;
  /// lhs - rhs; zero when the row holds.
  ext::DiffForm residual;
};

struct StructureCheck {
  Level level;
  std::vector<StructureRow> rows;

  bool holds() const;
};

/// Exact comparison of d of the tautological forms with the assembled right
/// hand side. Throws PreconditionError for the reduced and e levels unless
/// A = B = 0.
StructureCheck verify_structure_eq(const PDESystem& sys, Level level);

/// Flat iff P_y = Q_y = R_y = 0, P_x2 = Q_x1 and Q_x2 = R_x1, otherwise
/// NotIntegrable (for z-free systems these conditions are A = B = 0).
/// Throws Error when an input depends on z1 or z2.
Verdict corollary37(const RatFunc& P, const RatFunc& Q, const RatFunc& R);

enum class ZDegree { within_quadratic, exceeds_quadratic, inapplicable };
std::string to_string(ZDegree z);

/// Total (z1, z2)-degree screen; inapplicable when some f_ij is not
/// polynomial in z1, z2.
ZDegree quadratic_obstruction(const PDESystem& sys);

}  // namespace jetflat::curv
