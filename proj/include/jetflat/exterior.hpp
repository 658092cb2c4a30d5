#pragma once

// Differential forms with exact rational-function coefficients.
//
// A k-form is stored as a map from k-element sets of coordinate
// differentials (bitmasks over the chart) to nonzero coefficients, so
// dx_{i1}∧...∧dx_{ik} is always kept with i1 < ... < ik.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "jetflat/symexpr.hpp"

namespace jetflat::ext {

using sym::Chart;
using sym::RatFunc;

/// A vector field: one RatFunc component per chart coordinate.
class VectorField {
public:
  explicit VectorField(Chart chart);
  VectorField(Chart chart, std::vector<RatFunc> components);

  const Chart& chart() const noexcept { return chart_; }
  const RatFunc& operator[](std::size_t i) const { return components_[i]; }
  const std::vector<RatFunc>& components() const noexcept { return components_; }

  /// Lie derivative of a function: Σ X^u ∂f/∂u.
  RatFunc apply(const RatFunc& f) const;

private:
  Chart chart_;
  std::vector<RatFunc> components_;
};

class DiffForm {
public:
  using Mask = std::uint32_t;

  /// The zero form of the given degree.
  DiffForm(Chart chart, unsigned degree);

  static DiffForm function(const RatFunc& f);
  static DiffForm differential(const Chart& chart, std::string_view name);
  /// f · dx_I for a set of differentials.
  static DiffForm term(const RatFunc& f, Mask mask);
  /// Σ c_i dx_i with one coefficient per chart coordinate.
  static DiffForm one_form(const Chart& chart, const std::vector<RatFunc>& coefficients);

  const Chart& chart() const noexcept { return chart_; }
  unsigned degree() const noexcept { return degree_; }
  const std::map<Mask, RatFunc>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Coefficient of dx_I (zero when absent).
  RatFunc coefficient(Mask mask) const;
  /// Coefficient of dx_i in a 1-form.
  RatFunc component(std::size_t i) const { return coefficient(Mask{1} << i); }

  DiffForm operator-() const;
  DiffForm& operator+=(const DiffForm& other);
  DiffForm& operator-=(const DiffForm& other);
  friend DiffForm operator+(DiffForm a, const DiffForm& b) { return a += b; }
  friend DiffForm operator-(DiffForm a, const DiffForm& b) { return a -= b; }
  friend DiffForm operator*(const RatFunc& f, const DiffForm& w);

  friend bool operator==(const DiffForm& a, const DiffForm& b);

private:
  void add_term(Mask mask, const RatFunc& f);

  Chart chart_;
  unsigned degree_;
  std::map<Mask, RatFunc> terms_;
};

/// Sign of dx_I ∧ dx_J relative to dx_{I∪J}; 0 when I and J overlap.
int wedge_sign(DiffForm::Mask a, DiffForm::Mask b);

DiffForm wedge(const DiffForm& a, const DiffForm& b);
DiffForm d(const DiffForm& w);

/// Interior product ι_X w.
DiffForm interior(const VectorField& x, const DiffForm& w);

/// Reduction modulo the algebraic ideal generated by 1-forms. Each ideal
/// form, after reduction by the earlier ones, is solved for the differential
/// of its highest-index coordinate, which is then eliminated from w.
/// Throws Error when an ideal form reduces to zero.
DiffForm reduce_mod(const DiffForm& w, const std::vector<DiffForm>& ideal);

/// Pullback along a map given by one component per coordinate of w's chart,
/// all over a common source chart.
DiffForm pullback(const DiffForm& w, const sym::Bindings& map, const Chart& source);

/// Coefficients of w in the wedge basis built from a coframe. Keys are masks
/// over the coframe index. Throws Error when the coframe is singular.
std::map<DiffForm::Mask, RatFunc> frame_components(const DiffForm& w, const std::vector<DiffForm>& coframe);

/// Dual vector fields of a coframe of 1-forms spanning the cotangent space.
std::vector<VectorField> dual_basis(const std::vector<DiffForm>& coframe);

/// Coordinate notation, e.g. "-z1*dx1 + dy" or "(1/x1)*dx1∧dz2".
std::string to_string(const DiffForm& w);
/// Frame notation with the given labels, e.g. "2*θ0∧ω1".
std::string to_string(const DiffForm& w, const std::vector<DiffForm>& coframe,
                      const std::vector<std::string>& labels);

}  // namespace jetflat::ext
