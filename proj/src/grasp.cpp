#include "teleassist/grasp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace teleassist {

namespace {

Vec3 reference_vector(ReferenceAxis axis) {
  return axis == ReferenceAxis::X ? Vec3::UnitX() : Vec3::UnitY();
}

ReferenceAxis other(ReferenceAxis axis) {
  return axis == ReferenceAxis::X ? ReferenceAxis::Y : ReferenceAxis::X;
}

// Evenly spaced index offsets centred on zero: k - n/2 for k in [0, n).
double centred(int k, int n) { return static_cast<double>(k - n / 2); }

}  // namespace

AlignedFrame align_with_reference(const Quat& current, const Vec3& axis_ee,
                                  const Vec3& target_world, ReferenceAxis preferred) {
  for (ReferenceAxis ref : {preferred, other(preferred)}) {
    const PlaneProjection local = project_onto_plane(reference_vector(ref), axis_ee);
    if (local.degenerate) continue;
    const Vec3 b_ee = local.v.normalized();
    const PlaneProjection world = project_onto_plane(current * b_ee, target_world);
    if (world.degenerate) continue;
    const Vec3 b_w = world.v.normalized();

    Mat3 basis_ee;
    basis_ee << b_ee, axis_ee.cross(b_ee), axis_ee;
    Mat3 basis_w;
    basis_w << b_w, target_world.cross(b_w), target_world;
    return {Quat(basis_w * basis_ee.transpose()).normalized(), ref};
  }
  // Two orthogonal reference axes cannot both be parallel to one direction.
  throw std::logic_error("align_with_reference: both reference axes are degenerate");
}

GraspAnchor grasp_anchor(const Pose& ee_pose, const RayHit& hit, double standoff,
                         ReferenceAxis preferred) {
  const AlignedFrame frame = align_with_reference(ee_pose.q, Vec3::UnitZ(), -hit.normal, preferred);
  GraspAnchor anchor;
  anchor.pose.q = frame.rotation;
  anchor.pose.p = hit.point + standoff * hit.normal;
  anchor.hit = hit;
  anchor.reference_used = frame.used;
  return anchor;
}

Pose CandidatePattern::candidate(const Pose& anchor, std::size_t index) const {
  const std::size_t n_roll = roll_angles.size();
  const Vec3& offset = translation_offsets[index / n_roll];
  const double roll = roll_angles[index % n_roll];
  Pose out;
  out.p = anchor.p + anchor.q * offset;
  const Quat spin(std::cos(0.5 * roll), 0.0, 0.0, std::sin(0.5 * roll));
  out.q = anchor.q * spin;
  return out;
}

std::vector<Pose> CandidatePattern::candidates(const Pose& anchor) const {
  std::vector<Pose> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(candidate(anchor, i));
  return out;
}

CandidatePattern make_pattern(const PatternSpec& spec) {
  if (spec.n_radial <= 0 || spec.n_ring <= 0 || spec.n_depth <= 0 || spec.n_roll <= 0) {
    throw std::invalid_argument("make_pattern: all counts must be positive");
  }
  if (!(spec.diameter >= 0.0) || !(spec.thickness >= 0.0)) {
    throw std::invalid_argument("make_pattern: envelope must be non-negative");
  }
  const double radius = 0.5 * spec.diameter;
  const double half_depth = 0.5 * spec.thickness;
  const double ring_step = radius / std::max(1, spec.n_radial - 1);
  const double depth_step = half_depth / std::max(1, spec.n_depth / 2);

  CandidatePattern pattern;
  pattern.translation_offsets.reserve(static_cast<std::size_t>(spec.n_radial * spec.n_ring * spec.n_depth));
  for (int d = 0; d < spec.n_depth; ++d) {
    const double z = centred(d, spec.n_depth) * depth_step;
    for (int r = 0; r < spec.n_radial; ++r) {
      const double rho = r * ring_step;
      for (int a = 0; a < spec.n_ring; ++a) {
        const double phi = 2.0 * std::numbers::pi * a / spec.n_ring;
        pattern.translation_offsets.emplace_back(rho * std::cos(phi), rho * std::sin(phi), z);
      }
    }
  }
  for (int k = 0; k < spec.n_roll; ++k) {
    pattern.roll_angles.push_back(centred(k, spec.n_roll) * std::numbers::pi / spec.n_roll);
  }
  return pattern;
}

CandidatePattern make_pattern(int n_radial, int n_ring, int n_depth, int n_roll) {
  PatternSpec spec;
  spec.n_radial = n_radial;
  spec.n_ring = n_ring;
  spec.n_depth = n_depth;
  spec.n_roll = n_roll;
  return make_pattern(spec);
}

std::optional<std::size_t> nearest_feasible(std::span<const Pose> poses, const OverlapMask& mask,
                                            const Pose& anchor, double beta, TranslationTerm term) {
  std::optional<std::size_t> best;
  double best_d = 0.0;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (mask[i]) continue;
    const double d = pose_distance_squared(poses[i], anchor, beta, term);
    if (!best || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

std::optional<Suggestion> suggest_grasp(const SceneModel& scene, const GripperProxy& proxy,
                                        const Pose& anchor, const CandidatePattern& pattern,
                                        const GraspQuery& query) {
  const std::vector<Pose> poses = pattern.candidates(anchor);
  const OverlapMask mask = batch_overlaps(scene, proxy, poses, query.exclude, query.workers);
  const auto index = nearest_feasible(poses, mask, anchor, query.beta, query.term);
  if (!index) return std::nullopt;
  Suggestion s;
  s.pose = poses[*index];
  s.distance_to_anchor = pose_distance(s.pose, anchor, query.beta, query.term);
  s.kind = s.distance_to_anchor == 0.0 ? SuggestionKind::Anchor : SuggestionKind::Candidate;
  s.feasible = true;
  s.candidate_index = index;
  return s;
}

double pattern_envelope(const CandidatePattern& pattern, double beta, TranslationTerm term) {
  double worst = 0.0;
  const Pose origin;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    worst = std::max(worst, pose_distance(pattern.candidate(origin, i), origin, beta, term));
  }
  return worst;
}

}  // namespace teleassist
