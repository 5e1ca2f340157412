#include "teleassist/place.hpp"

#include <stdexcept>

namespace teleassist {

SupportFacet record_support_facet(const SceneModel& scene, const Pose& ee_pose_at_pick,
                                  const std::string& object_id) {
  SupportFacet facet;
  facet.object_id = object_id;
  const Pose world_to_ee = ee_pose_at_pick.inverse();
  facet.normal_ee = (ee_pose_at_pick.q.conjugate() * kGravityDirection).normalized();

  const ObjectIndex held = scene.exclude_index(object_id);
  Vec3 point_world;
  if (auto hit = raycast(scene, ee_pose_at_pick.p, kGravityDirection, held)) {
    point_world = hit->point;
  } else {
    const auto& table = scene.description().table;
    const Vec3 normal = table.pose.rotate(Vec3::UnitZ());
    const Vec3 on_top = table.pose.transform_point(Vec3(0.0, 0.0, 0.5 * table.size.z()));
    point_world = ee_pose_at_pick.p - (ee_pose_at_pick.p - on_top).dot(normal) * normal;
    facet.estimated = true;
  }
  facet.point_ee = world_to_ee.transform_point(point_world);
  return facet;
}

PlaceAnchor place_anchor(const Pose& ee_pose, const SupportFacet& facet, const RayHit& hit,
                         ReferenceAxis preferred) {
  const AlignedFrame frame =
      align_with_reference(ee_pose.q, facet.normal_ee, -hit.normal, preferred);
  PlaceAnchor anchor;
  anchor.pose.q = frame.rotation;
  anchor.pose.p = hit.point - frame.rotation * facet.point_ee;
  anchor.hit = hit;
  anchor.reference_used = frame.used;
  return anchor;
}

OrientedBox held_object_box(const Vec3& size, const Pose& object_in_ee) {
  return OrientedBox{0.5 * size, object_in_ee};
}

std::optional<Suggestion> suggest_place(const SceneModel& scene, const GripperProxy& proxy,
                                        const OrientedBox& held_box, const PlaceAnchor& anchor,
                                        const CandidatePattern* pattern, const PlaceQuery& query) {
  const GripperProxy combined = proxy.with_attached(held_box);
  if (pattern != nullptr) {
    GraspQuery q;
    q.beta = query.beta;
    q.term = query.term;
    q.exclude = query.held;
    q.workers = query.workers;
    return suggest_grasp(scene, combined, anchor.pose, *pattern, q);
  }
  Suggestion s;
  s.pose = anchor.pose;
  s.kind = SuggestionKind::Anchor;
  s.distance_to_anchor = 0.0;
  s.feasible = !overlaps(scene, combined, anchor.pose, query.held);
  return s;
}

}  // namespace teleassist
