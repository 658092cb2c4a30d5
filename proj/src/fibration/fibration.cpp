#include "jetflat/fibration.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace jetflat::fib {

namespace {

using Vec = Eigen::VectorXd;

Vec4 basis(int i) { return Vec4::Unit(i - 1); }

// Relative size of v outside the coordinate subspace spanned by `keep` (1-based).
double outside_defect(const Vec4& v, std::initializer_list<int> keep) {
  const double total = v.norm();
  if (total == 0) return 1;
  double out = 0;
  for (int i = 0; i < 4; ++i) {
    if (std::find(keep.begin(), keep.end(), i + 1) == keep.end()) out += v[i] * v[i];
  }
  return std::sqrt(out) / total;
}

// sin of the angle between the lines [u] and [v].
double line_angle(const Vec4& u, const Vec4& v) {
  const Vec4 a = u.normalized(), b = v.normalized();
  return (a - a.dot(b) * b).norm();
}

Mat4 inverse_transpose(const Mat4& m) {
  Eigen::FullPivLU<Mat4> lu(m);
  if (!lu.isInvertible()) throw Error("matrix is numerically singular");
  return lu.inverse().transpose();
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::string format(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

bool has_decomposition_rule(const SubgroupSpec& spec) {
  for (const auto& s : lemma_specs()) {
    if (s.name() == spec.name()) return true;
  }
  return false;
}

}  // namespace

GroupElement::GroupElement(const Mat4& m) : m_(m) {
  const double norm = m.norm();
  if (!(std::abs(m.determinant() - 1) <= 1e-9 * (1 + std::pow(norm, 4)))) {
    throw Error("matrix is not in SL(4, R): det = " + format(m.determinant()));
  }
}

SubgroupSpec SubgroupSpec::point_stabilizer(int i) {
  if (i < 1 || i > 4) throw Error("stabilizer index must be 1..4");
  return SubgroupSpec(Kind::point_stabilizer, i);
}

SubgroupSpec SubgroupSpec::hyperplane_stabilizer(int i) {
  if (i < 1 || i > 4) throw Error("stabilizer index must be 1..4");
  return SubgroupSpec(Kind::hyperplane_stabilizer, i);
}

SubgroupSpec SubgroupSpec::intersection(std::vector<SubgroupSpec> parts) {
  if (parts.empty()) throw Error("empty intersection");
  return SubgroupSpec(Kind::intersection, 0, std::move(parts));
}

std::string SubgroupSpec::name() const {
  switch (kind_) {
    case Kind::full_sl4: return "sl4";
    case Kind::scale_symmetry: return "scale";
    case Kind::compact_type: return "compact";
    case Kind::point_stabilizer: return "H" + std::to_string(index_);
    case Kind::hyperplane_stabilizer: return "H̄" + std::to_string(index_);
    case Kind::intersection: {
      // H4 ∩ H̄1 is written H.
      std::vector<std::string> names;
      for (const auto& p : parts_) names.push_back(p.name());
      std::string out;
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i + 1 < names.size() && names[i] == "H4" && names[i + 1] == "H̄1") {
          out += (out.empty() ? "" : "∩") + std::string("H");
          ++i;
        } else {
          out += (out.empty() ? "" : "∩") + names[i];
        }
      }
      return out;
    }
  }
  return "?";
}

std::vector<std::pair<int, int>> SubgroupSpec::zero_entries() const {
  std::set<std::pair<int, int>> out;
  switch (kind_) {
    case Kind::full_sl4: break;
    case Kind::scale_symmetry:
      out = {{1, 0}, {3, 0}, {0, 1}, {3, 1}, {0, 2}, {1, 2}, {3, 2}};
      break;
    case Kind::compact_type:
      for (const auto& e : point_stabilizer(3).zero_entries()) out.insert(e);
      for (const auto& e : hyperplane_stabilizer(3).zero_entries()) out.insert(e);
      break;
    case Kind::point_stabilizer:
      for (int j = 0; j < 4; ++j) {
        if (j != index_ - 1) out.insert({j, index_ - 1});
      }
      break;
    case Kind::hyperplane_stabilizer:
      for (int j = 0; j < 4; ++j) {
        if (j != index_ - 1) out.insert({index_ - 1, j});
      }
      break;
    case Kind::intersection:
      for (const auto& p : parts_) {
        for (const auto& e : p.zero_entries()) out.insert(e);
      }
      break;
  }
  return {out.begin(), out.end()};
}

double membership_defect(const GroupElement& g, const SubgroupSpec& spec) {
  const Mat4& m = g.matrix();
  using Kind = SubgroupSpec::Kind;
  switch (spec.kind()) {
    case Kind::full_sl4: return 0;
    case Kind::scale_symmetry:
      return std::max({outside_defect(m * basis(1), {1, 3}), outside_defect(m * basis(2), {2, 3}),
                       outside_defect(m * basis(3), {3})});
    case Kind::compact_type:
      return std::max(membership_defect(g, SubgroupSpec::point_stabilizer(3)),
                      membership_defect(g, SubgroupSpec::hyperplane_stabilizer(3)));
    case Kind::point_stabilizer: return line_angle(m * basis(spec.index()), basis(spec.index()));
    case Kind::hyperplane_stabilizer:
      return line_angle(inverse_transpose(m) * basis(spec.index()), basis(spec.index()));
    case Kind::intersection: {
      double worst = 0;
      for (const auto& p : spec.parts()) worst = std::max(worst, membership_defect(g, p));
      return worst;
    }
  }
  return 1;
}

bool membership(const GroupElement& g, const SubgroupSpec& spec) {
  return membership_defect(g, spec) <= kMembershipTol;
}

GroupElement cartan_involution(const GroupElement& g) { return GroupElement(inverse_transpose(g.matrix())); }

int lie_algebra_dim(const SubgroupSpec& spec) {
  const auto zeros = spec.zero_entries();
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(zeros.size()) + 1, 16);
  for (std::size_t r = 0; r < zeros.size(); ++r) C(static_cast<Eigen::Index>(r), zeros[r].first * 4 + zeros[r].second) = 1;
  for (int i = 0; i < 4; ++i) C(C.rows() - 1, i * 4 + i) = 1;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
  const Vec& s = svd.singularValues();
  const double cutoff = kRankTol * s.maxCoeff();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s[i] > cutoff;
  return 16 - rank;
}

GroupElement random_element(const SubgroupSpec& spec, Rng& rng) {
  Mat4 X;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) X(i, j) = uniform(rng, -1, 1);
  }
  for (const auto& [i, j] : spec.zero_entries()) X(i, j) = 0;
  X.diagonal().array() -= X.trace() / 4;
  Mat4 sign = Mat4::Identity();
  const int pick = std::uniform_int_distribution<int>(0, 7)(rng);
  // Even number of -1 entries: bits of pick choose entries 1..3, entry 4 fixes the parity.
  int negatives = 0;
  for (int i = 0; i < 3; ++i) {
    if (pick & (1 << i)) {
      sign(i, i) = -1;
      ++negatives;
    }
  }
  if (negatives % 2 == 1) sign(3, 3) = -1;
  return GroupElement(sign * X.exp());
}

Decomposition iwasawa_lower(const GroupElement& g) {
  const Mat4& m = g.matrix();
  if (!Eigen::FullPivLU<Mat4>(m).isInvertible()) throw Error("singular matrix has no Iwasawa factorization");
  // QR of g J (J reverses columns) gives g = (Q J)(J R J) with J R J lower triangular.
  Mat4 J = Mat4::Zero();
  for (int i = 0; i < 4; ++i) J(i, 3 - i) = 1;
  Eigen::HouseholderQR<Mat4> qr(m * J);
  const Mat4 Q = qr.householderQ();
  const Mat4 R = qr.matrixQR().triangularView<Eigen::Upper>();
  Mat4 k = Q * J;
  Mat4 L = J * R * J;
  const Vec4 s = L.diagonal().array().sign();
  k = k * s.asDiagonal();
  L = s.asDiagonal() * L;
  Mat4 a = L.diagonal().asDiagonal();
  Mat4 n = a.inverse() * L;
  n.triangularView<Eigen::StrictlyUpper>().setZero();
  n.diagonal().setOnes();
  return {k, a, n, (k * a * n - m).norm()};
}

const Mat4& m1() {
  static const Mat4 m = Vec4(-1, -1, 1, 1).asDiagonal();
  return m;
}

const Mat4& m4() {
  static const Mat4 m = Vec4(1, 1, -1, -1).asDiagonal();
  return m;
}

std::vector<SubgroupSpec> lemma_specs() {
  const SubgroupSpec G = SubgroupSpec::compact_type();
  return {G, SubgroupSpec::intersection({G, SubgroupSpec::point_stabilizer(4)}),
          SubgroupSpec::intersection({G, SubgroupSpec::hyperplane_stabilizer(1)}),
          SubgroupSpec::intersection({G, SubgroupSpec::point_stabilizer(4), SubgroupSpec::hyperplane_stabilizer(1)})};
}

bool IntersectionDecomposition::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const FactorCheck& c) { return c.passed; });
}

IntersectionDecomposition decompose_in_intersection(const GroupElement& g, const SubgroupSpec& spec) {
  if (!has_decomposition_rule(spec)) throw Error("no decomposition rule for " + spec.name());
  if (!membership(g, spec)) throw Error("element is not in " + spec.name());
  const std::string name = spec.name();
  const bool fixes4 = name.find("H4") != std::string::npos || name == "compact∩H";
  const bool fixes1 = name.find("H̄1") != std::string::npos || name == "compact∩H";

  IntersectionDecomposition out{iwasawa_lower(g), Mat4::Identity(), Mat4::Identity(), {}};
  const Mat4& k = out.factors.k;
  if (fixes1 && k(0, 0) < 0) out.sign = out.sign * m1();
  if (fixes4 && k(3, 3) < 0) out.sign = out.sign * m4();
  out.k_reduced = k * out.sign;

  const SubgroupSpec G = SubgroupSpec::compact_type();
  const double scale = 1 + g.matrix().norm();
  const auto add = [&](std::string label, double defect, double tol) {
    out.checks.push_back({std::move(label), defect, defect <= tol});
  };
  const Mat4& kr = out.k_reduced;
  const Mat4& a = out.factors.a;
  const Mat4& n = out.factors.n;
  add("reconstruction", out.factors.residual / scale, kResidualTol);
  add("k orthogonal", (kr.transpose() * kr - Mat4::Identity()).norm(), kMembershipTol);
  add("det k = 1", std::abs(kr.determinant() - 1), kMembershipTol);
  add("k in G", membership_defect(GroupElement(kr), G), kMembershipTol);
  if (fixes4) add("k fixes e4", (kr * basis(4) - basis(4)).norm(), kMembershipTol);
  if (fixes1) add("k fixes e1", (kr * basis(1) - basis(1)).norm(), kMembershipTol);
  const Vec4 ad = a.diagonal();
  add("a positive diagonal", (a - Mat4(ad.asDiagonal())).norm() + (ad.minCoeff() > 0 ? 0.0 : 1.0), kMembershipTol);
  add("n lower unitriangular", Mat4(n.triangularView<Eigen::StrictlyUpper>()).norm() +
                                   (n.diagonal() - Vec4::Ones()).norm(), kMembershipTol);
  add("n in G", membership_defect(GroupElement(n), G), kMembershipTol);
  const bool sign_ok = out.sign.isApprox(Mat4::Identity()) || (fixes1 && out.sign.isApprox(m1())) ||
                       (fixes4 && out.sign.isApprox(m4())) || (fixes1 && fixes4 && out.sign.isApprox(m1() * m4()));
  add("finite factor", sign_ok ? 0.0 : 1.0, 0);
  return out;
}

std::optional<Vec3> projective_action(const GroupElement& g, const Vec3& p) {
  const Vec4 h = g.matrix() * Vec4(p[0], p[1], p[2], 1);
  if (std::abs(h[3]) <= 1e-12 * g.matrix().norm() * (1 + p.norm())) return std::nullopt;
  return Vec3(h[0] / h[3], h[1] / h[3], h[2] / h[3]);
}

GroupElement translation(const Vec3& a) {
  Mat4 m = Mat4::Identity();
  m.block<3, 1>(0, 3) = a;
  return GroupElement(m);
}

bool OrbitReport::passed() const {
  return std::all_of(probes.begin(), probes.end(), [](const ProbeResult& p) { return p.failures == 0; });
}

namespace {

class Probe {
public:
  explicit Probe(std::string name) : result_{std::move(name), 0, 0, 0, ""} {}

  void record(double defect, double tol, const std::string& what) {
    ++result_.samples;
    result_.max_defect = std::max(result_.max_defect, defect);
    if (!(defect <= tol)) {
      ++result_.failures;
      if (result_.witness.empty()) result_.witness = what + " (defect " + format(defect) + ")";
    }
  }
  ProbeResult result() const { return result_; }

private:
  ProbeResult result_;
};

// A 3x3 block on (e1, e2, e4) with the given column set to w and det 1
// after fixing the (3,3) entry.
GroupElement block_with_column(const Eigen::Vector3d& w, int column) {
  Eigen::HouseholderQR<Eigen::Matrix<double, 3, 1>> qr(w);
  const Eigen::Matrix3d Q = qr.householderQ();
  Eigen::Matrix3d B;
  int other = 1;
  for (int c = 0; c < 3; ++c) B.col(c) = c == column ? w : Eigen::Vector3d(Q.col(other++));
  const int idx[3] = {0, 1, 3};
  Mat4 m = Mat4::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m(idx[i], idx[j]) = B(i, j);
  }
  m(2, 2) = 1 / B.determinant();
  return GroupElement(m);
}

ProbeResult plane_probe(Rng& rng, int samples) {
  Probe probe("planes map to planes");
  const SubgroupSpec sl4 = SubgroupSpec::full_sl4();
  int done = 0;
  while (done < samples) {
    const GroupElement g = random_element(sl4, rng);
    Mat4 rows;
    bool finite = true;
    for (int r = 0; r < 4; ++r) {
      const double x1 = uniform(rng, -1, 1), x2 = uniform(rng, -1, 1);
      const auto img = projective_action(g, Vec3(x1, x2, x1 + x2));
      if (!img) {
        finite = false;
        break;
      }
      const Vec4 h((*img)[0], (*img)[1], (*img)[2], 1);
      rows.row(r) = h.normalized();
    }
    if (!finite) continue;
    ++done;
    probe.record(std::abs(rows.determinant()), kMembershipTol, "four images of y = x1 + x2 not coplanar");
  }
  return probe.result();
}

OrbitReport compact_probes(const SubgroupSpec& G, Rng& rng, int samples) {
  Probe stays("orbit of [e4] stays in {v3 = 0}"), reach("every [v] with v3 = 0 is g[e4]");
  Probe hstays("orbit of [e1*] stays in {w3 = 0}"), hreach("every [w] with w3 = 0 is θ(g)[e1]");
  Probe closed("cartan involution preserves G");
  for (int s = 0; s < samples; ++s) {
    const GroupElement g = random_element(G, rng);
    stays.record(outside_defect(g.matrix() * basis(4), {1, 2, 4}), kMembershipTol, "g[e4] left the plane");
    const GroupElement t = cartan_involution(g);
    hstays.record(outside_defect(t.matrix() * basis(1), {1, 2, 4}), kMembershipTol, "θ(g)[e1] left the plane");
    closed.record(membership_defect(t, G), kMembershipTol, "θ(g) not in G");

    const Eigen::Vector3d w = Eigen::Vector3d(uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)).normalized();
    const Vec4 v(w[0], w[1], 0, w[2]);
    const GroupElement h = block_with_column(w, 2);
    reach.record(std::max(line_angle(h.matrix() * basis(4), v), membership_defect(h, G)), kMembershipTol,
                 "constructed element misses [v]");
    const GroupElement h1 = cartan_involution(block_with_column(w, 0));
    hreach.record(std::max(line_angle(cartan_involution(h1).matrix() * basis(1), v), membership_defect(h1, G)),
                  kMembershipTol, "constructed element misses [w]");
  }
  return {{stays.result(), reach.result(), hstays.result(), hreach.result(), closed.result(),
           plane_probe(rng, samples)}};
}

OrbitReport scale_probes(const SubgroupSpec& G, Rng& rng, int samples) {
  Probe chart("orbit of [e4] lies in the affine chart"), reach("Φ(a) sends 0 to a");
  Probe line("orbit of [e1*] lies in {w2 = w3 = 0}"), lreach("every (1, 0, 0, t) is θ(g)[e1]");
  for (int s = 0; s < samples; ++s) {
    const GroupElement g = random_element(G, rng);
    const Vec4 v = g.matrix() * basis(4);
    chart.record(std::abs(v[3]) > kMembershipTol * v.norm() ? 0.0 : 1.0, 0, "g[e4] at infinity");
    const Vec4 w = cartan_involution(g).matrix() * basis(1);
    line.record(std::max(outside_defect(w, {1, 4}), std::abs(w[0]) > kMembershipTol * w.norm() ? 0.0 : 1.0),
                kMembershipTol, "θ(g)[e1] left the line");

    const Vec3 a(uniform(rng, -5, 5), uniform(rng, -5, 5), uniform(rng, -5, 5));
    const GroupElement phi = translation(a);
    const auto img = projective_action(phi, Vec3::Zero());
    reach.record(std::max(img ? (*img - a).norm() / (1 + a.norm()) : 1.0, membership_defect(phi, G)),
                 kMembershipTol, "Φ(a)·0 differs from a");
    const double t = uniform(rng, -5, 5);
    Mat4 m = Mat4::Identity();
    m(0, 3) = -t;
    const GroupElement e(m);
    const Vec4 target(1, 0, 0, t);
    lreach.record(std::max(line_angle(cartan_involution(e).matrix() * basis(1), target), membership_defect(e, G)),
                  kMembershipTol, "constructed element misses (1, 0, 0, t)");
  }
  return {{chart.result(), reach.result(), line.result(), lreach.result(), plane_probe(rng, samples)}};
}

}  // namespace

OrbitReport orbit_probe(const SubgroupSpec& spec, Rng& rng, int samples) {
  if (spec.kind() == SubgroupSpec::Kind::compact_type) return compact_probes(spec, rng, samples);
  if (spec.kind() == SubgroupSpec::Kind::scale_symmetry) return scale_probes(spec, rng, samples);
  throw Error("orbit probes are defined for compact and scale only");
}

SubgroupSpec group_spec(const std::string& group) {
  if (group == "sl4") return SubgroupSpec::full_sl4();
  if (group == "scale") return SubgroupSpec::scale_symmetry();
  if (group == "compact") return SubgroupSpec::compact_type();
  throw Error("unknown group '" + group + "' (expected sl4, scale or compact)");
}

FibrationTable fibration_table(const std::string& group) {
  const SubgroupSpec G = group_spec(group);
  const auto with = [&](std::vector<SubgroupSpec> extra) {
    if (G.kind() == SubgroupSpec::Kind::full_sl4) return extra.size() == 1 ? extra[0] : SubgroupSpec::intersection(extra);
    extra.insert(extra.begin(), G);
    return SubgroupSpec::intersection(std::move(extra));
  };
  const int g = lie_algebra_dim(G);
  const int h4 = lie_algebra_dim(with({SubgroupSpec::point_stabilizer(4)}));
  const int h1 = lie_algebra_dim(with({SubgroupSpec::hyperplane_stabilizer(1)}));
  const int h = lie_algebra_dim(with({SubgroupSpec::point_stabilizer(4), SubgroupSpec::hyperplane_stabilizer(1)}));

  std::array<const char*, 5> models{};
  if (group == "sl4") models = {"RP^3", "RP^3", "F(1,3)", "RP^2", "RP^2"};
  if (group == "scale") models = {"R^3", "R", "R^3", "{0}", "R^2"};
  if (group == "compact") models = {"RP^2", "RP^2", "F(1,2)", "S^1", "S^1"};
  return {group,
          {{"G", g}, {"G∩H4", h4}, {"G∩H̄1", h1}, {"G∩H", h}},
          {{"G/(G∩H4)", g - h4, models[0]},
           {"G/(G∩H̄1)", g - h1, models[1]},
           {"G/(G∩H)", g - h, models[2]},
           {"(G∩H4)/(G∩H)", h4 - h, models[3]},
           {"(G∩H̄1)/(G∩H)", h1 - h, models[4]}}};
}

}  // namespace jetflat::fib
