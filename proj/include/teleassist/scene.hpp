#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teleassist/se3.hpp"

namespace teleassist {

/// Object index inside a SceneModel. 0 is always the table.
using ObjectIndex = std::int32_t;
inline constexpr ObjectIndex kNoObject = -1;
inline constexpr ObjectIndex kTableObject = 0;
inline constexpr std::string_view kTableId = "table";

struct TableSpec {
  Vec3 size = Vec3(1.2, 0.8, 0.04);
  Pose pose = Pose{Vec3(0.0, 0.0, -0.02), Quat::Identity()};
};

struct BlockSpec {
  std::string id;
  Vec3 size = Vec3::Constant(0.04);
  Pose pose;
  std::string color = "blue";
};

struct OrientedBox {
  Vec3 half_extents = Vec3::Zero();
  Pose offset;  // box frame expressed in the end-effector frame
};

/// Collision stand-in for the gripper, expressed in the end-effector frame.
/// The end-effector origin sits at the centre of the fingertip plane and r_z
/// points out of the fingers.
struct GripperProxy {
  std::vector<OrientedBox> boxes;

  /// Two fingers and a palm bar, roughly the size of a Panda hand.
  static GripperProxy panda_like();

  GripperProxy with_attached(const OrientedBox& box) const;
  void validate() const;
};

struct SceneDescription {
  TableSpec table;
  std::vector<BlockSpec> blocks;
  std::vector<Pose> snap_hints;
  std::optional<GripperProxy> gripper;
  double margin = 0.0;  // inflation applied to proxy boxes in overlap tests

  /// Throws std::invalid_argument on duplicate ids or non-positive sizes.
  void validate() const;
  const BlockSpec* find_block(std::string_view id) const;
};

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;
  std::vector<Vec3> face_normals;
  std::vector<ObjectIndex> face_object;

  std::size_t size() const { return triangles.size(); }
  const Vec3& vertex(std::size_t face, int corner) const {
    return vertices[triangles[face][static_cast<std::size_t>(corner)]];
  }
};

struct Aabb {
  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = Vec3::Constant(-std::numeric_limits<double>::infinity());

  void extend(const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  void extend(const Aabb& b) {
    lo = lo.cwiseMin(b.lo);
    hi = hi.cwiseMax(b.hi);
  }
  bool intersects(const Aabb& b) const {
    return (lo.array() <= b.hi.array()).all() && (b.lo.array() <= hi.array()).all();
  }
  bool contains(const Aabb& b) const {
    return (lo.array() <= b.lo.array()).all() && (b.hi.array() <= hi.array()).all();
  }
};

struct BvhNode {
  Aabb box;
  std::uint32_t first = 0;  // leaf: index into Bvh::order; inner: left child
  std::uint32_t count = 0;  // 0 for inner nodes
  bool is_leaf() const { return count > 0; }
};

/// Median-split bounding volume hierarchy over mesh triangles. Inner nodes
/// store their children at indices first and first + 1.
class Bvh {
 public:
  static constexpr std::uint32_t kLeafSize = 4;

  Bvh() = default;
  explicit Bvh(const TriMesh& mesh);

  const std::vector<BvhNode>& nodes() const { return nodes_; }
  const std::vector<std::uint32_t>& order() const { return order_; }

  /// Flat byte image of the tree, used to check build determinism.
  std::string serialize() const;

 private:
  void build(const TriMesh& mesh, const std::vector<Vec3>& centroids, std::uint32_t node,
             std::uint32_t begin, std::uint32_t end);

  std::vector<BvhNode> nodes_;
  std::vector<std::uint32_t> order_;
};

struct RayHit {
  Vec3 point = Vec3::Zero();   // p_t
  Vec3 normal = Vec3::UnitZ(); // n_t, faces the ray origin
  double distance = 0.0;
  std::uint32_t face = 0;
  ObjectIndex object = kNoObject;
  std::optional<std::string> object_id;
};

/// Solid box of one scene object, used for containment queries.
struct ObjectSolid {
  Pose pose;
  Vec3 half_extents;
};

class SceneModel {
 public:
  static constexpr double kMinRayDistance = 1e-6;
  /// Shapes that interpenetrate by no more than this are touching, not colliding.
  static constexpr double kContactTolerance = 1e-7;

  static SceneModel build(const SceneDescription& desc);

  const TriMesh& mesh() const { return mesh_; }
  const Bvh& bvh() const { return bvh_; }
  const SceneDescription& description() const { return desc_; }
  const std::vector<ObjectSolid>& solids() const { return solids_; }
  std::size_t object_count() const { return ids_.size(); }
  double margin() const { return desc_.margin; }

  const std::string& object_id(ObjectIndex i) const { return ids_.at(static_cast<std::size_t>(i)); }
  std::optional<ObjectIndex> find(std::string_view id) const;
  /// Index for an optional id; unknown or absent ids map to kNoObject.
  ObjectIndex exclude_index(std::optional<std::string_view> id) const;

 private:
  SceneDescription desc_;
  TriMesh mesh_;
  Bvh bvh_;
  std::vector<std::string> ids_;
  std::vector<ObjectSolid> solids_;
};

/// Appends the 12 outward-facing triangles of a box to the mesh.
void append_box(TriMesh& mesh, const Vec3& size, const Pose& pose, ObjectIndex object);

/// Moller-Trumbore. Returns the ray parameter of a hit, if any.
std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& dir,
                                         const Vec3& a, const Vec3& b, const Vec3& c);

std::optional<RayHit> raycast(const SceneModel& scene, const Vec3& origin, const Vec3& dir,
                              ObjectIndex exclude = kNoObject);
std::optional<RayHit> raycast(const SceneModel& scene, const Vec3& origin, const Vec3& dir,
                              std::optional<std::string_view> exclude);

/// Separating-axis test between a box (centre, axes as matrix columns,
/// half-extents) and a triangle. Touching within tolerance does not count.
bool box_triangle_overlap(const Vec3& center, const Mat3& axes, const Vec3& half,
                          const Vec3& a, const Vec3& b, const Vec3& c,
                          double tolerance = SceneModel::kContactTolerance);

bool overlaps(const SceneModel& scene, const GripperProxy& proxy, const Pose& ee_pose,
              ObjectIndex exclude = kNoObject);
bool overlaps(const SceneModel& scene, const GripperProxy& proxy, const Pose& ee_pose,
              std::optional<std::string_view> exclude);

using OverlapMask = std::vector<std::uint8_t>;

/// Data-parallel map of overlaps() over poses. `workers` <= 0 uses the
/// OpenMP default. The result does not depend on the worker count.
OverlapMask batch_overlaps(const SceneModel& scene, const GripperProxy& proxy,
                           std::span<const Pose> poses, ObjectIndex exclude = kNoObject,
                           int workers = 0);

/// Sequential reference for batch_overlaps.
OverlapMask batch_overlaps_serial(const SceneModel& scene, const GripperProxy& proxy,
                                  std::span<const Pose> poses, ObjectIndex exclude = kNoObject);

}  // namespace teleassist
