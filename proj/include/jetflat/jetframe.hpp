#pragma once

// Jet-space geometry of a second-order system y_{x_i x_j} = f_ij(x, y, z):
// the adapted coframe, its dual frame, frame derivatives, the Frobenius
// obstructions A and B, and contact lifts of scale transformations.

#include <array>
#include <span>
#include <string>

#include "jetflat/exterior.hpp"
#include "jetflat/symexpr.hpp"

namespace jetflat::jet {

using sym::Chart;
using sym::RatFunc;

/// The chart (x1, x2, y, z1, z2).
const Chart& base_chart();

struct PDESystem {
  RatFunc f11, f12, f22;

  /// Checks charts; f21 is identified with f12.
  PDESystem(RatFunc f11, RatFunc f12, RatFunc f22);
  /// The flat system f = 0.
  PDESystem();
  /// Parses the three right-hand sides over the base chart.
  static PDESystem parse(std::string_view f11, std::string_view f12, std::string_view f22);

  const RatFunc& f(int i, int j) const;
};

enum class Frame { theta0, theta1, theta2, omega1, omega2 };

inline constexpr std::array<Frame, 5> kFrames = {Frame::theta0, Frame::theta1, Frame::theta2, Frame::omega1,
                                                 Frame::omega2};

/// "θ0", "θ1", "θ2", "ω1", "ω2".
std::string frame_label(Frame f);

/// θ̲0, θ̲1, θ̲2, ω̲1, ω̲2 in that order.
std::array<ext::DiffForm, 5> coframe(const PDESystem& sys);
/// ∂_θ̲0, ∂_θ̲1, ∂_θ̲2, ∂_ω̲1, ∂_ω̲2 in that order.
std::array<ext::VectorField, 5> dual_frame(const PDESystem& sys);

/// Applies one frame vector field to f.
RatFunc frame_derive(const PDESystem& sys, const RatFunc& f, Frame direction);
/// Iterated frame derivative read left to right: path {a, b} is ∂_b(∂_a f).
RatFunc frame_derive(const PDESystem& sys, const RatFunc& f, std::span<const Frame> path);

struct Integrability {
  RatFunc A, B;
  bool integrable() const { return A.is_zero() && B.is_zero(); }
};

Integrability integrability(const PDESystem& sys);

/// (x1, x2, y) -> (X1(x1), X2(x2), Y(x1, x2, y)), all over the base chart.
struct ScaleMap {
  RatFunc X1, X2, Y;

  /// Throws Error when a component has the wrong dependencies or a Jacobian
  /// factor vanishes identically.
  ScaleMap(RatFunc X1, RatFunc X2, RatFunc Y);
};

struct ContactLift {
  RatFunc Z1, Z2;
  /// Y_y, the factor in φ̂*θ̲0 = Y_y θ̲0.
  RatFunc factor;
  /// Whether the pulled-back contact form equals factor·θ̲0 exactly.
  bool identity_holds;
};

ContactLift contact_lift_verify(const ScaleMap& map);

/// The system whose solutions are mapped by `map` to solutions of `target`.
/// The flat target gives systems that are flat by construction.
PDESystem pull_back_system(const PDESystem& target, const ScaleMap& map);

}  // namespace jetflat::jet
