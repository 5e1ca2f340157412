#include "teleassist/snap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace teleassist {

double snap_potential(const SnapField& field, const Pose& pose) {
  if (field.poses.empty()) throw std::invalid_argument("snap_potential: empty snap field");
  double best = std::numeric_limits<double>::infinity();
  for (const Pose& g : field.poses) best = std::min(best, pose_distance(pose, g, field.beta, field.term));
  return best;
}

std::optional<SnapResult> apply_snap(const SnapField& field, const Pose& anchor) {
  if (field.poses.empty()) return std::nullopt;
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < field.poses.size(); ++i) {
    const double d = pose_distance(anchor, field.poses[i], field.beta, field.term);
    if (d < best_d) {
      best = i;
      best_d = d;
    }
  }
  // best_d is both the distance to G* and the anchor's own potential.
  if (!(best_d <= field.epsilon) || !(best_d < field.gamma)) return std::nullopt;
  return SnapResult{field.poses[best], best, best_d};
}

namespace {

struct BlockFrame {
  const BlockSpec* block;
  ObjectIndex index;
  Vec3 center;
  Vec3 up;       // face normal closest to world +z
  double up_half;
  Vec3 side_u;
  double half_u;
  Vec3 side_v;
  double half_v;
};

BlockFrame block_frame(const BlockSpec& block, ObjectIndex index) {
  const Mat3 r = block.pose.rotation();
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(r(2, i)) > std::abs(r(2, k))) k = i;
  }
  const double sign = r(2, k) >= 0.0 ? 1.0 : -1.0;
  const int u = (k + 1) % 3;
  const int v = (k + 2) % 3;
  const Vec3 half = 0.5 * block.size;
  return {&block, index, block.pose.p, sign * r.col(k), half[k], r.col(u), half[u], r.col(v), half[v]};
}

Quat frame_from_axes(const Vec3& r_x, const Vec3& r_z) {
  Mat3 m;
  m << r_x, r_z.cross(r_x), r_z;
  return Quat(m).normalized();
}

std::vector<BlockFrame> sorted_blocks(const SceneModel& scene) {
  std::vector<BlockFrame> frames;
  const auto& blocks = scene.description().blocks;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    frames.push_back(block_frame(blocks[i], static_cast<ObjectIndex>(i + 1)));
  }
  std::sort(frames.begin(), frames.end(),
            [](const BlockFrame& a, const BlockFrame& b) { return a.block->id < b.block->id; });
  return frames;
}

}  // namespace

std::vector<Pose> axis_aligned_snap_set(const SceneModel& scene, double standoff) {
  std::vector<Pose> out;
  for (const BlockFrame& f : sorted_blocks(scene)) {
    const Vec3 top = f.center + f.up_half * f.up;
    for (const Vec3& r_x : {f.side_u, f.side_v}) {
      out.push_back(Pose{top + standoff * f.up, frame_from_axes(r_x, -f.up)});
    }
    const std::pair<Vec3, double> sides[4] = {
        {f.side_u, f.half_u}, {-f.side_u, f.half_u}, {f.side_v, f.half_v}, {-f.side_v, f.half_v}};
    for (const auto& [normal, half] : sides) {
      const Vec3 face = f.center + half * normal;
      out.push_back(Pose{face + standoff * normal, frame_from_axes(-f.up, -normal)});
    }
  }
  return out;
}

std::vector<Pose> axis_aligned_place_set(const SceneModel& scene, const SupportFacet& facet,
                                         ReferenceAxis preferred) {
  std::vector<Pose> out;
  for (const BlockFrame& f : sorted_blocks(scene)) {
    if (f.block->id == facet.object_id) continue;
    RayHit hit;
    hit.point = f.center + f.up_half * f.up;
    hit.normal = f.up;
    hit.object = f.index;
    hit.object_id = f.block->id;
    for (const Vec3& r_x : {f.side_u, f.side_v}) {
      const Pose reference{hit.point, frame_from_axes(r_x, -f.up)};
      out.push_back(place_anchor(reference, facet, hit, preferred).pose);
    }
  }
  return out;
}

std::vector<Pose> filter_collision_free(const SceneModel& scene, const GripperProxy& proxy,
                                        const std::vector<Pose>& poses, ObjectIndex exclude,
                                        int workers) {
  const OverlapMask mask = batch_overlaps(scene, proxy, poses, exclude, workers);
  std::vector<Pose> out;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (!mask[i]) out.push_back(poses[i]);
  }
  return out;
}

}  // namespace teleassist
