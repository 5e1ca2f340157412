#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "teleassist/place.hpp"
#include "teleassist/scene.hpp"
#include "teleassist/se3.hpp"

namespace teleassist {

struct SnapField {
  std::vector<Pose> poses;  // G
  double epsilon = 0.06;    // distance threshold
  double gamma = 0.03;      // potential threshold
  double beta = 0.05;
  TranslationTerm term = TranslationTerm::AsPrinted;
};

/// phi(pose) = min_i d(pose, G_i). Throws std::invalid_argument on an empty field.
double snap_potential(const SnapField& field, const Pose& pose);

struct SnapResult {
  Pose pose;
  std::size_t index = 0;
  double distance = 0.0;
};

/// Nearest snap pose G* (lowest index on ties). Fires when d(anchor, G*) <= epsilon
/// and the anchor's potential d(anchor, G*) is below gamma. An empty field never fires.
std::optional<SnapResult> apply_snap(const SnapField& field, const Pose& anchor);

/// Per block, sorted by id: two top-down grasps (fingers closing across each
/// horizontal block axis) then four side approaches. Positions sit at the
/// face centre offset by `standoff` along the face normal.
std::vector<Pose> axis_aligned_snap_set(const SceneModel& scene, double standoff);

/// Placements of the held object centred on top of every other block, in the
/// two axis-aligned yaws. Sorted by block id.
std::vector<Pose> axis_aligned_place_set(const SceneModel& scene, const SupportFacet& facet,
                                         ReferenceAxis preferred = ReferenceAxis::X);

/// Drops poses whose proxy collides with the scene.
std::vector<Pose> filter_collision_free(const SceneModel& scene, const GripperProxy& proxy,
                                        const std::vector<Pose>& poses,
                                        ObjectIndex exclude = kNoObject, int workers = 0);

}  // namespace teleassist
