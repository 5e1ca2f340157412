#include "teleassist/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <set>
#include <stdexcept>

namespace teleassist {

GripperProxy GripperProxy::panda_like() {
  GripperProxy proxy;
  // Fingers 0.02 x 0.01 x 0.05 m centred at +-0.04 m along r_y, tips at z = 0.
  for (double side : {-1.0, 1.0}) {
    proxy.boxes.push_back(
        {Vec3(0.01, 0.005, 0.025), Pose{Vec3(0.0, side * 0.04, -0.025), Quat::Identity()}});
  }
  // Palm bar 0.03 x 0.09 x 0.04 m directly behind the fingers.
  proxy.boxes.push_back({Vec3(0.015, 0.045, 0.02), Pose{Vec3(0.0, 0.0, -0.07), Quat::Identity()}});
  return proxy;
}

GripperProxy GripperProxy::with_attached(const OrientedBox& box) const {
  GripperProxy out = *this;
  out.boxes.push_back(box);
  return out;
}

void GripperProxy::validate() const {
  if (boxes.empty()) throw std::invalid_argument("gripper proxy has no boxes");
  for (const auto& b : boxes) {
    if (!((b.half_extents.array() > 0.0).all())) {
      throw std::invalid_argument("gripper proxy box has non-positive half extent");
    }
  }
}

void SceneDescription::validate() const {
  if (!((table.size.array() > 0.0).all())) {
    throw std::invalid_argument("table size must be strictly positive");
  }
  std::set<std::string, std::less<>> ids;
  for (const auto& b : blocks) {
    if (b.id.empty()) throw std::invalid_argument("block with empty id");
    if (b.id == kTableId) throw std::invalid_argument("block id 'table' is reserved");
    if (!ids.insert(b.id).second) throw std::invalid_argument("duplicate block id '" + b.id + "'");
    if (!((b.size.array() > 0.0).all())) {
      throw std::invalid_argument("block '" + b.id + "' has non-positive size");
    }
  }
  if (gripper) gripper->validate();
  if (margin < 0.0) throw std::invalid_argument("margin must be non-negative");
}

const BlockSpec* SceneDescription::find_block(std::string_view id) const {
  for (const auto& b : blocks) {
    if (b.id == id) return &b;
  }
  return nullptr;
}

void append_box(TriMesh& mesh, const Vec3& size, const Pose& pose, ObjectIndex object) {
  const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
  const Vec3 half = 0.5 * size;
  for (int i = 0; i < 8; ++i) {
    const Vec3 s((i & 1) ? 1.0 : -1.0, (i & 2) ? 1.0 : -1.0, (i & 4) ? 1.0 : -1.0);
    mesh.vertices.push_back(pose.transform_point(half.cwiseProduct(s)));
  }
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3;
    const int v = (axis + 2) % 3;
    for (int side = 0; side < 2; ++side) {
      std::array<std::uint32_t, 4> quad{};
      const int cycle[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
      for (int k = 0; k < 4; ++k) {
        const int corner = (side << axis) | (cycle[k][0] << u) | (cycle[k][1] << v);
        quad[static_cast<std::size_t>(k)] = base + static_cast<std::uint32_t>(corner);
      }
      // (u, v, axis) is a cyclic permutation, so this winding faces +axis.
      if (side == 0) std::swap(quad[1], quad[3]);
      for (const auto& tri : {std::array<std::uint32_t, 3>{quad[0], quad[1], quad[2]},
                              std::array<std::uint32_t, 3>{quad[0], quad[2], quad[3]}}) {
        const Vec3& a = mesh.vertices[tri[0]];
        const Vec3& b = mesh.vertices[tri[1]];
        const Vec3& c = mesh.vertices[tri[2]];
        mesh.triangles.push_back(tri);
        mesh.face_normals.push_back((b - a).cross(c - a).normalized());
        mesh.face_object.push_back(object);
      }
    }
  }
}

namespace {

void put_bytes(std::string& out, const void* data, std::size_t n) {
  out.append(static_cast<const char*>(data), n);
}

}  // namespace

Bvh::Bvh(const TriMesh& mesh) {
  const auto n = static_cast<std::uint32_t>(mesh.size());
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0u);
  if (n == 0) return;
  std::vector<Vec3> centroids(n);
  for (std::uint32_t f = 0; f < n; ++f) {
    centroids[f] = (mesh.vertex(f, 0) + mesh.vertex(f, 1) + mesh.vertex(f, 2)) / 3.0;
  }
  nodes_.reserve(2 * n);
  nodes_.emplace_back();
  build(mesh, centroids, 0, 0, n);
}

void Bvh::build(const TriMesh& mesh, const std::vector<Vec3>& centroids, std::uint32_t node,
                std::uint32_t begin, std::uint32_t end) {
  Aabb box;
  Aabb centre_box;
  for (std::uint32_t i = begin; i < end; ++i) {
    const std::uint32_t f = order_[i];
    for (int k = 0; k < 3; ++k) box.extend(mesh.vertex(f, k));
    centre_box.extend(centroids[f]);
  }
  nodes_[node].box = box;
  if (end - begin <= kLeafSize) {
    nodes_[node].first = begin;
    nodes_[node].count = end - begin;
    return;
  }
  int axis = 0;
  const Vec3 extent = centre_box.hi - centre_box.lo;
  if (extent.y() > extent[axis]) axis = 1;
  if (extent.z() > extent[axis]) axis = 2;
  std::sort(order_.begin() + begin, order_.begin() + end, [&](std::uint32_t a, std::uint32_t b) {
    if (centroids[a][axis] != centroids[b][axis]) return centroids[a][axis] < centroids[b][axis];
    return a < b;
  });
  const auto left = static_cast<std::uint32_t>(nodes_.size());
  nodes_[node].first = left;
  nodes_[node].count = 0;
  nodes_.emplace_back();
  nodes_.emplace_back();
  const std::uint32_t mid = begin + (end - begin) / 2;
  build(mesh, centroids, left, begin, mid);
  build(mesh, centroids, left + 1, mid, end);
}

std::string Bvh::serialize() const {
  std::string out;
  const auto n_nodes = static_cast<std::uint64_t>(nodes_.size());
  const auto n_order = static_cast<std::uint64_t>(order_.size());
  put_bytes(out, &n_nodes, sizeof n_nodes);
  put_bytes(out, &n_order, sizeof n_order);
  for (const auto& node : nodes_) {
    put_bytes(out, node.box.lo.data(), 3 * sizeof(double));
    put_bytes(out, node.box.hi.data(), 3 * sizeof(double));
    put_bytes(out, &node.first, sizeof node.first);
    put_bytes(out, &node.count, sizeof node.count);
  }
  put_bytes(out, order_.data(), order_.size() * sizeof(std::uint32_t));
  return out;
}

SceneModel SceneModel::build(const SceneDescription& desc) {
  desc.validate();
  SceneModel scene;
  scene.desc_ = desc;
  scene.ids_.emplace_back(kTableId);
  scene.solids_.push_back({desc.table.pose, 0.5 * desc.table.size});
  append_box(scene.mesh_, desc.table.size, desc.table.pose, kTableObject);
  for (const auto& block : desc.blocks) {
    const auto index = static_cast<ObjectIndex>(scene.ids_.size());
    scene.ids_.push_back(block.id);
    scene.solids_.push_back({block.pose, 0.5 * block.size});
    append_box(scene.mesh_, block.size, block.pose, index);
  }
  scene.bvh_ = Bvh(scene.mesh_);
  return scene;
}

std::optional<ObjectIndex> SceneModel::find(std::string_view id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == id) return static_cast<ObjectIndex>(i);
  }
  return std::nullopt;
}

ObjectIndex SceneModel::exclude_index(std::optional<std::string_view> id) const {
  if (!id) return kNoObject;
  return find(*id).value_or(kNoObject);
}

std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& dir, const Vec3& a,
                                         const Vec3& b, const Vec3& c) {
  const Vec3 e1 = b - a;
  const Vec3 e2 = c - a;
  const Vec3 pvec = dir.cross(e2);
  const double det = e1.dot(pvec);
  if (std::abs(det) < 1e-14) return std::nullopt;
  const double inv = 1.0 / det;
  const Vec3 tvec = origin - a;
  const double u = tvec.dot(pvec) * inv;
  if (u < 0.0 || u > 1.0) return std::nullopt;
  const Vec3 qvec = tvec.cross(e1);
  const double v = dir.dot(qvec) * inv;
  if (v < 0.0 || u + v > 1.0) return std::nullopt;
  const double t = e2.dot(qvec) * inv;
  if (!(t > SceneModel::kMinRayDistance)) return std::nullopt;
  return t;
}

namespace {

// Slab test with a small slack so that boxes grazed by the ray are visited.
bool ray_box(const Vec3& origin, const Vec3& inv_dir, const Aabb& box, double t_max,
             double& t_enter) {
  double t0 = 0.0;
  double t1 = t_max;
  for (int k = 0; k < 3; ++k) {
    const double slack = 1e-9 * (1.0 + std::abs(box.lo[k]) + std::abs(box.hi[k]));
    const double lo = box.lo[k] - slack;
    const double hi = box.hi[k] + slack;
    if (std::isinf(inv_dir[k])) {
      if (origin[k] < lo || origin[k] > hi) return false;
      continue;
    }
    double ta = (lo - origin[k]) * inv_dir[k];
    double tb = (hi - origin[k]) * inv_dir[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  t_enter = t0;
  return true;
}

}  // namespace

std::optional<RayHit> raycast(const SceneModel& scene, const Vec3& origin, const Vec3& dir,
                              ObjectIndex exclude) {
  const auto& nodes = scene.bvh().nodes();
  if (nodes.empty()) return std::nullopt;
  const auto& mesh = scene.mesh();
  const auto& order = scene.bvh().order();
  Vec3 inv_dir;
  for (int k = 0; k < 3; ++k) {
    inv_dir[k] = dir[k] == 0.0 ? std::numeric_limits<double>::infinity() : 1.0 / dir[k];
  }

  double best_t = std::numeric_limits<double>::infinity();
  std::uint32_t best_face = 0;
  bool found = false;

  std::uint32_t stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const BvhNode& node = nodes[stack[--top]];
    double t_enter = 0.0;
    const double limit = found ? best_t * (1.0 + 1e-9) + 1e-9 : std::numeric_limits<double>::max();
    if (!ray_box(origin, inv_dir, node.box, limit, t_enter)) continue;
    if (node.is_leaf()) {
      for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
        const std::uint32_t f = order[i];
        if (mesh.face_object[f] == exclude) continue;
        const auto t = intersect_triangle(origin, dir, mesh.vertex(f, 0), mesh.vertex(f, 1),
                                          mesh.vertex(f, 2));
        if (!t) continue;
        if (!found || *t < best_t || (*t == best_t && f < best_face)) {
          best_t = *t;
          best_face = f;
          found = true;
        }
      }
    } else {
      stack[top++] = node.first + 1;
      stack[top++] = node.first;
    }
  }
  if (!found) return std::nullopt;

  RayHit hit;
  hit.distance = best_t;
  hit.point = origin + best_t * dir;
  hit.face = best_face;
  hit.normal = mesh.face_normals[best_face];
  if (hit.normal.dot(dir) > 0.0) hit.normal = -hit.normal;
  hit.object = mesh.face_object[best_face];
  hit.object_id = scene.object_id(hit.object);
  return hit;
}

std::optional<RayHit> raycast(const SceneModel& scene, const Vec3& origin, const Vec3& dir,
                              std::optional<std::string_view> exclude) {
  return raycast(scene, origin, dir, scene.exclude_index(exclude));
}

}  // namespace teleassist
