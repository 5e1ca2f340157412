#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "teleassist/scene.hpp"
#include "teleassist/se3.hpp"

namespace teleassist {

/// Gripper-fixed vector used to pick the roll about the approach axis.
enum class ReferenceAxis { X, Y };

struct AlignedFrame {
  Quat rotation;
  ReferenceAxis used = ReferenceAxis::X;
};

/// Builds the rotation that sends the ee-frame unit vector `axis_ee` to the
/// world unit vector `target_world` while fixing the roll about it: the
/// reference axis (made perpendicular to `axis_ee`) lands on the projection of
/// its current world direction onto the plane normal to `target_world`.
/// Falls back to the other reference axis when the preferred one degenerates.
/// Shared by grasp and placement anchors.
AlignedFrame align_with_reference(const Quat& current, const Vec3& axis_ee,
                                  const Vec3& target_world, ReferenceAxis preferred);

struct GraspAnchor {
  Pose pose;  // e_g
  RayHit hit;
  ReferenceAxis reference_used = ReferenceAxis::X;
};

/// Anchor with approach axis r_z = -n_t, placed at p_t + standoff * n_t.
GraspAnchor grasp_anchor(const Pose& ee_pose, const RayHit& hit, double standoff,
                         ReferenceAxis preferred = ReferenceAxis::X);

struct PatternSpec {
  int n_radial = 5;  // concentric rings, the first at radius zero
  int n_ring = 19;   // angular positions per ring
  int n_depth = 5;   // layers along the approach axis
  int n_roll = 15;   // rolls about the approach axis
  double diameter = 0.02;
  double thickness = 0.01;

  std::size_t count() const {
    return static_cast<std::size_t>(n_radial) * static_cast<std::size_t>(n_ring) *
           static_cast<std::size_t>(n_depth) * static_cast<std::size_t>(n_roll);
  }
};

/// Local sampling envelope around an anchor. Offsets are in the anchor frame
/// (x, y across the disc, z along the approach axis). Candidate i uses offset
/// i / |rolls| and roll i % |rolls|.
struct CandidatePattern {
  std::vector<Vec3> translation_offsets;
  std::vector<double> roll_angles;

  std::size_t size() const { return translation_offsets.size() * roll_angles.size(); }
  /// Candidate pose about the anchor. The zero offset with zero roll returns
  /// the anchor bit-for-bit.
  Pose candidate(const Pose& anchor, std::size_t index) const;
  std::vector<Pose> candidates(const Pose& anchor) const;
};

/// Throws std::invalid_argument on zero or negative counts.
CandidatePattern make_pattern(const PatternSpec& spec);
CandidatePattern make_pattern(int n_radial, int n_ring, int n_depth, int n_roll);

enum class SuggestionKind { Anchor, Candidate, Snap };

struct Suggestion {
  Pose pose;
  SuggestionKind kind = SuggestionKind::Anchor;
  double distance_to_anchor = 0.0;
  bool feasible = true;
  std::optional<std::size_t> candidate_index;
};

/// Index of the feasible pose nearest to `anchor` (lowest index on ties).
/// A mask entry of 1 marks a colliding pose.
std::optional<std::size_t> nearest_feasible(std::span<const Pose> poses, const OverlapMask& mask,
                                            const Pose& anchor, double beta,
                                            TranslationTerm term = TranslationTerm::AsPrinted);

struct GraspQuery {
  double beta = 0.05;
  TranslationTerm term = TranslationTerm::AsPrinted;
  ObjectIndex exclude = kNoObject;
  int workers = 0;
};

/// Batch-filters the pattern about the anchor and returns the nearest
/// collision-free candidate, or nothing when every candidate collides.
std::optional<Suggestion> suggest_grasp(const SceneModel& scene, const GripperProxy& proxy,
                                        const Pose& anchor, const CandidatePattern& pattern,
                                        const GraspQuery& query = {});
inline std::optional<Suggestion> suggest_grasp(const SceneModel& scene, const GripperProxy& proxy,
                                               const GraspAnchor& anchor,
                                               const CandidatePattern& pattern, double beta) {
  return suggest_grasp(scene, proxy, anchor.pose, pattern, GraspQuery{.beta = beta});
}

/// Largest pose distance from the anchor over the whole pattern.
double pattern_envelope(const CandidatePattern& pattern, double beta,
                        TranslationTerm term = TranslationTerm::AsPrinted);

}  // namespace teleassist
