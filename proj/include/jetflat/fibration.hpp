#pragma once

// Numeric model of the flat double fibrations: subgroups of SL(4, R), their
// Lie-algebra dimensions, the lower Iwasawa factorization g = k a n̄ and the
// projective action on R^3.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jetflat/symexpr.hpp"

namespace jetflat::fib {

using Mat4 = Eigen::Matrix4d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Rng = std::mt19937_64;

inline constexpr double kMembershipTol = 1e-9;
inline constexpr double kResidualTol = 1e-10;
inline constexpr double kRankTol = 1e-9;

/// A 4x4 real matrix with determinant 1 up to 1e-9·(1 + ‖g‖_F^4).
class GroupElement {
public:
  /// Throws Error when the determinant condition fails.
  explicit GroupElement(const Mat4& m);
  static GroupElement identity() { return GroupElement(Mat4::Identity()); }

  const Mat4& matrix() const noexcept { return m_; }
  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) { return GroupElement(a.m_ * b.m_); }

private:
  Mat4 m_;
};

class SubgroupSpec {
public:
  enum class Kind { full_sl4, scale_symmetry, compact_type, point_stabilizer, hyperplane_stabilizer, intersection };

  static SubgroupSpec full_sl4() { return SubgroupSpec(Kind::full_sl4); }
  static SubgroupSpec scale_symmetry() { return SubgroupSpec(Kind::scale_symmetry); }
  static SubgroupSpec compact_type() { return SubgroupSpec(Kind::compact_type); }
  /// H_i = {g : g[e_i] = [e_i]}, i in 1..4.
  static SubgroupSpec point_stabilizer(int i);
  /// H̄_i = {g : ᵗg⁻¹[e_i] = [e_i]}, i in 1..4.
  static SubgroupSpec hyperplane_stabilizer(int i);
  static SubgroupSpec intersection(std::vector<SubgroupSpec> parts);
  /// H = H_4 ∩ H̄_1.
  static SubgroupSpec H() { return intersection({point_stabilizer(4), hyperplane_stabilizer(1)}); }

  Kind kind() const noexcept { return kind_; }
  int index() const noexcept { return index_; }
  const std::vector<SubgroupSpec>& parts() const noexcept { return parts_; }
  /// "compact", "H4", "H̄1", "compact∩H4", ...
  std::string name() const;

  /// Entries (row, column) forced to vanish in the Lie algebra.
  std::vector<std::pair<int, int>> zero_entries() const;

private:
  explicit SubgroupSpec(Kind kind, int index = 0, std::vector<SubgroupSpec> parts = {})
      : kind_(kind), index_(index), parts_(std::move(parts)) {}

  Kind kind_;
  int index_;
  std::vector<SubgroupSpec> parts_;
};

/// Largest relative defect of the spec's projective conditions; 0 for sl4.
double membership_defect(const GroupElement& g, const SubgroupSpec& spec);
bool membership(const GroupElement& g, const SubgroupSpec& spec);

/// ᵗg⁻¹. Throws Error for numerically singular g.
GroupElement cartan_involution(const GroupElement& g);

/// Nullity of the linear constraints on traceless 4x4 matrices.
int lie_algebra_dim(const SubgroupSpec& spec);

/// exp(X) for X uniform in [-1, 1] on the spec's free entries (made
/// traceless), times a random diagonal sign matrix of determinant 1.
GroupElement random_element(const SubgroupSpec& spec, Rng& rng);

struct Decomposition {
  Mat4 k, a, n;
  /// ‖k a n − g‖_F.
  double residual;
};

/// g = k a n̄: k special orthogonal, a positive diagonal, n̄ lower unitriangular.
/// Throws Error for singular input.
Decomposition iwasawa_lower(const GroupElement& g);

struct FactorCheck {
  std::string name;
  double defect;
  bool passed;
};

struct IntersectionDecomposition {
  Decomposition factors;
  /// The finite factor from M_4, M_1 or ⟨m_1, m_4⟩ (identity for G itself).
  Mat4 sign;
  /// k·sign, the factor in K∩G, K_4∩G, K_1∩G or K_1∩K_4∩G.
  Mat4 k_reduced;
  std::vector<FactorCheck> checks;

  bool all_passed() const;
};

/// One of compact, compact∩H4, compact∩H̄1, compact∩H.
std::vector<SubgroupSpec> lemma_specs();

/// Throws Error when g is not in spec or spec is not one of lemma_specs().
IntersectionDecomposition decompose_in_intersection(const GroupElement& g, const SubgroupSpec& spec);

const Mat4& m1();
const Mat4& m4();

/// The fractional-linear action on (x1, x2, y); nullopt at infinity.
std::optional<Vec3> projective_action(const GroupElement& g, const Vec3& p);

/// Φ(a): the translation by a in the affine chart.
GroupElement translation(const Vec3& a);

struct ProbeResult {
  std::string name;
  int samples;
  int failures;
  double max_defect;
  std::string witness;
};

struct OrbitReport {
  std::vector<ProbeResult> probes;
  bool passed() const;
};

/// Sampled orbit checks for compact_type or scale_symmetry.
OrbitReport orbit_probe(const SubgroupSpec& spec, Rng& rng, int samples = 100);

struct DimensionRow {
  std::string name;
  int dim;
};

struct QuotientRow {
  std::string name;   // e.g. "G/(G∩H4)"
  int dim;
  std::string model;  // model space, e.g. "RP^2"
};

struct FibrationTable {
  std::string group;
  std::vector<DimensionRow> dims;  // G, G∩H4, G∩H̄1, G∩H
  std::vector<QuotientRow> quotients;
};

/// Group names "sl4", "scale", "compact". Throws Error otherwise.
SubgroupSpec group_spec(const std::string& group);
FibrationTable fibration_table(const std::string& group);

}  // namespace jetflat::fib
