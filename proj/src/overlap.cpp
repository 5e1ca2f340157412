// Gripper-proxy overlap queries. batch_overlaps is the OpenMP kernel;
// batch_overlaps_serial is the reference it is tested and benchmarked against.

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "teleassist/scene.hpp"

namespace teleassist {

namespace {

// Interval [lo, hi] vs [-r, r]: separated unless they overlap by more than tol.
inline bool separated(double lo, double hi, double r, double tol) {
  return lo > r - tol || hi < -r + tol;
}

struct PreparedBox {
  Mat3 rotation;  // offset rotation in the ee frame
  Vec3 translation;
  Vec3 half;
};

struct PreparedProxy {
  std::vector<PreparedBox> boxes;

  PreparedProxy(const GripperProxy& proxy, double margin) {
    boxes.reserve(proxy.boxes.size());
    for (const auto& b : proxy.boxes) {
      boxes.push_back({b.offset.rotation(), b.offset.p, b.half_extents.array() + margin});
    }
  }
};

bool point_inside_solid(const Vec3& x, const ObjectSolid& solid, double tol) {
  const Vec3 local = solid.pose.q.conjugate() * (x - solid.pose.p);
  return (local.cwiseAbs().array() < solid.half_extents.array() - tol).all();
}

bool box_hits_scene(const SceneModel& scene, const Vec3& center, const Mat3& axes,
                    const Vec3& half, ObjectIndex exclude) {
  constexpr double tol = SceneModel::kContactTolerance;
  const auto& solids = scene.solids();
  for (std::size_t i = 0; i < solids.size(); ++i) {
    if (static_cast<ObjectIndex>(i) == exclude) continue;
    if (point_inside_solid(center, solids[i], tol)) return true;
  }

  const Vec3 extent = axes.cwiseAbs() * half;
  Aabb query;
  query.lo = center - extent;
  query.hi = center + extent;

  const auto& nodes = scene.bvh().nodes();
  if (nodes.empty()) return false;
  const auto& order = scene.bvh().order();
  const auto& mesh = scene.mesh();

  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const BvhNode& node = nodes[stack[--top]];
    if (!node.box.intersects(query)) continue;
    if (node.is_leaf()) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t f = order[i];
        if (mesh.face_object[f] == exclude) continue;
        if (box_triangle_overlap(center, axes, half, mesh.vertex(f, 0), mesh.vertex(f, 1),
                                 mesh.vertex(f, 2), tol)) {
          return true;
        }
      }
    } else {
      stack[top++] = node.first + 1;
      stack[top++] = node.first;
    }
  }
  return false;
}

bool overlaps_prepared(const SceneModel& scene, const PreparedProxy& proxy, const Pose& ee_pose,
                       ObjectIndex exclude) {
  const Mat3 r = ee_pose.rotation();
  for (const auto& box : proxy.boxes) {
    const Vec3 center = ee_pose.p + r * box.translation;
    const Mat3 axes = r * box.rotation;
    if (box_hits_scene(scene, center, axes, box.half, exclude)) return true;
  }
  return false;
}

}  // namespace

bool box_triangle_overlap(const Vec3& center, const Mat3& axes, const Vec3& half, const Vec3& a,
                          const Vec3& b, const Vec3& c, double tolerance) {
  const Vec3 v[3] = {axes.transpose() * (a - center), axes.transpose() * (b - center),
                     axes.transpose() * (c - center)};

  // Box face normals.
  for (int k = 0; k < 3; ++k) {
    const double lo = std::min({v[0][k], v[1][k], v[2][k]});
    const double hi = std::max({v[0][k], v[1][k], v[2][k]});
    if (separated(lo, hi, half[k], tolerance)) return false;
  }

  const Vec3 edges[3] = {v[1] - v[0], v[2] - v[1], v[0] - v[2]};

  // Triangle normal.
  Vec3 n = edges[0].cross(edges[1]);
  const double n_len = n.norm();
  if (n_len > 1e-300) {
    n /= n_len;
    const double d = n.dot(v[0]);
    const double r = half.dot(n.cwiseAbs());
    if (separated(d, d, r, tolerance)) return false;
  }

  // Edge cross products, e_k x f_j with e_k the box axes in local coordinates.
  for (const Vec3& f : edges) {
    const double f_len = f.norm();
    for (int k = 0; k < 3; ++k) {
      Vec3 axis = Vec3::Unit(k).cross(f);
      const double len = axis.norm();
      if (len <= 1e-9 * f_len) continue;
      axis /= len;
      const double p0 = axis.dot(v[0]);
      const double p1 = axis.dot(v[1]);
      const double p2 = axis.dot(v[2]);
      const double r = half.dot(axis.cwiseAbs());
      if (separated(std::min({p0, p1, p2}), std::max({p0, p1, p2}), r, tolerance)) return false;
    }
  }
  return true;
}

bool overlaps(const SceneModel& scene, const GripperProxy& proxy, const Pose& ee_pose,
              ObjectIndex exclude) {
  return overlaps_prepared(scene, PreparedProxy(proxy, scene.margin()), ee_pose, exclude);
}

bool overlaps(const SceneModel& scene, const GripperProxy& proxy, const Pose& ee_pose,
              std::optional<std::string_view> exclude) {
  return overlaps(scene, proxy, ee_pose, scene.exclude_index(exclude));
}

OverlapMask batch_overlaps(const SceneModel& scene, const GripperProxy& proxy,
                           std::span<const Pose> poses, ObjectIndex exclude, int workers) {
  OverlapMask out(poses.size(), 0);
  const PreparedProxy prepared(proxy, scene.margin());
  const auto n = static_cast<std::ptrdiff_t>(poses.size());
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = overlaps_prepared(scene, prepared, poses[idx], exclude) ? 1 : 0;
  }
  return out;
}

OverlapMask batch_overlaps_serial(const SceneModel& scene, const GripperProxy& proxy,
                                  std::span<const Pose> poses, ObjectIndex exclude) {
  OverlapMask out;
  out.reserve(poses.size());
  for (const Pose& pose : poses) out.push_back(overlaps(scene, proxy, pose, exclude) ? 1 : 0);
  return out;
}

}  // namespace teleassist
