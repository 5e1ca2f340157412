#pragma once

#include <optional>
#include <string>

#include "teleassist/grasp.hpp"
#include "teleassist/scene.hpp"

namespace teleassist {

inline const Vec3 kGravityDirection{0.0, 0.0, -1.0};

/// Face the held object rested on, in the end-effector frame at pick time.
struct SupportFacet {
  Vec3 point_ee = Vec3::Zero();   // p_o
  Vec3 normal_ee = Vec3::UnitZ(); // n_o
  std::string object_id;
  bool estimated = false;  // downward raycast missed; point projected to the table plane
};

/// n_o is gravity expressed in the ee frame; p_o is where a downward ray from
/// p_e meets the scene once the held object is ignored.
SupportFacet record_support_facet(const SceneModel& scene, const Pose& ee_pose_at_pick,
                                  const std::string& object_id);

struct PlaceAnchor {
  Pose pose;  // e_p
  RayHit hit;
  ReferenceAxis reference_used = ReferenceAxis::X;
};

/// End-effector pose that puts the facet point on p_t with the facet normal
/// opposite n_t. Roll is fixed the same way as for grasp anchors.
PlaceAnchor place_anchor(const Pose& ee_pose, const SupportFacet& facet, const RayHit& hit,
                         ReferenceAxis preferred = ReferenceAxis::X);

/// Held object's box expressed in the end-effector frame.
OrientedBox held_object_box(const Vec3& size, const Pose& object_in_ee);

struct PlaceQuery {
  double beta = 0.05;
  TranslationTerm term = TranslationTerm::AsPrinted;
  ObjectIndex held = kNoObject;
  int workers = 0;
};

/// Without a pattern the anchor itself is returned, flagged infeasible when
/// the gripper or the held object would collide. With a pattern this behaves
/// as suggest_grasp over the combined proxy.
std::optional<Suggestion> suggest_place(const SceneModel& scene, const GripperProxy& proxy,
                                        const OrientedBox& held_box, const PlaceAnchor& anchor,
                                        const CandidatePattern* pattern, const PlaceQuery& query);

}  // namespace teleassist
