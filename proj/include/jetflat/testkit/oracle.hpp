#pragma once

// Finite-difference recomputation of curvature bases. Derivatives along
// frame fields are replaced by nested central differences evaluated in
// exact rational arithmetic, so the only error is truncation.

#include <span>

#include <gmpxx.h>

#include "jetflat/curvature.hpp"

namespace jetflat::testkit {

/// Base part of a curvature recipe at a point of (x1, x2, y, z1, z2).
mpq_class finite_difference_base(const curv::Recipe& recipe, const jet::PDESystem& sys,
                                 std::span<const mpq_class> point, const mpq_class& step);

/// |a - b| / max(|a|, |b|, 1).
double relative_error(double a, double b);

}  // namespace jetflat::testkit
