#pragma once

// Random inputs for property tests and the acceptance runner.

#include <random>
#include <string>
#include <vector>

#include "jetflat/jetframe.hpp"
#include "jetflat/symexpr.hpp"

namespace jetflat::testkit {

using Rng = std::mt19937_64;

/// Small rational p/q with |p| <= max_num and 1 <= q <= max_den.
mpq_class random_rational(Rng& rng, int max_num = 3, int max_den = 2);

/// Rational point aligned with the chart, avoiding zero coordinates.
std::vector<mpq_class> random_point(Rng& rng, std::size_t size);

/// Dense random polynomial of total degree <= degree in the named coordinates.
sym::RatFunc random_polynomial(Rng& rng, const sym::Chart& chart, const std::vector<std::string>& vars,
                               int degree);

/// Random expression tree built with + - * / and squaring.
sym::RatFunc random_expression(Rng& rng, const sym::Chart& chart, int depth);

/// f_ij = Hessian of a random quartic in (x1, x2).
jet::PDESystem hessian_quartic(Rng& rng);

/// An integrable polynomial system with z-degree <= 2: a decoupled or
/// λ z_i z_j seed, shifted by the Hessian of a random quadratic and moved by
/// a random linear change of the independent variables.
jet::PDESystem integrable_quadratic(Rng& rng);

/// Random polynomial triple with z-degree <= 2 and coefficients of degree
/// <= 1 in (x1, x2, y); usually not integrable.
jet::PDESystem random_quadratic(Rng& rng);

/// The integrable system obtained by adding λ·z1^3 style cubic terms that
/// keep A = B = 0: f11 = a0(x1) + a1(x1) z1 + a3 z1^3, others from the seed.
jet::PDESystem integrable_cubic(Rng& rng);

/// Random rational scale map: each X_i is a quadratic, affine or Möbius
/// function of x_i, and Y is affine or quadratic in y.
jet::ScaleMap random_scale_map(Rng& rng);

/// Systems that are flat by construction: the flat system pulled back by a
/// random rational scale map.
jet::PDESystem flat_by_scale_map(Rng& rng);

}  // namespace jetflat::testkit
