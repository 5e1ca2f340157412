#pragma once

// Shared fixtures and independent reference implementations for the tests.
// The oracles deliberately use different formulations from the library code.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "teleassist/grasp.hpp"
#include "teleassist/io.hpp"
#include "teleassist/scene.hpp"
#include "teleassist/se3.hpp"

namespace testsupport {

using namespace teleassist;

inline std::filesystem::path data_dir() { return TELEASSIST_DATA_DIR; }

inline SceneDescription bundled_scene(const std::string& name) {
  return load_scene(data_dir() / "scenes" / (name + ".json"));
}

inline const std::vector<std::string>& clutter_names() {
  static const std::vector<std::string> names{"clutter_a", "clutter_b", "clutter_c"};
  return names;
}

inline Quat random_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Quat q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

inline Vec3 random_in_box(std::mt19937_64& rng, const Vec3& lo, const Vec3& hi) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return Vec3(lo.x() + u(rng) * (hi.x() - lo.x()), lo.y() + u(rng) * (hi.y() - lo.y()),
              lo.z() + u(rng) * (hi.z() - lo.z()));
}

/// Rotation matrix from an axis-angle pair via Rodrigues' formula.
inline Mat3 rodrigues(const Vec3& axis, double angle) {
  Mat3 k;
  k << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
  return Mat3::Identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * k * k;
}

/// Pose metric straight from rotation matrices.
inline double matrix_distance_squared(const Pose& x, const Pose& y, double beta, bool squared_translation) {
  const double dp = (x.p - y.p).norm();
  const double tr = (y.rotation().transpose() * x.rotation()).trace();
  return (squared_translation ? dp * dp : dp) + 2.0 * beta * beta * (1.0 - tr / 3.0);
}

struct OracleHit {
  double t = std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> faces;  // all faces at the nearest distance
};

/// Plane intersection plus same-side edge tests, over every triangle.
inline OracleHit brute_force_raycast(const SceneModel& scene, const Vec3& o, const Vec3& d,
                                     ObjectIndex exclude = kNoObject) {
  const TriMesh& mesh = scene.mesh();
  OracleHit best;
  for (std::uint32_t f = 0; f < mesh.size(); ++f) {
    if (mesh.face_object[f] == exclude) continue;
    const Vec3& a = mesh.vertex(f, 0);
    const Vec3& b = mesh.vertex(f, 1);
    const Vec3& c = mesh.vertex(f, 2);
    const Vec3 n = (b - a).cross(c - a);
    const double denom = n.dot(d);
    if (std::abs(denom) < 1e-14 * n.norm()) continue;
    const double t = n.dot(a - o) / denom;
    if (!(t >= SceneModel::kMinRayDistance)) continue;
    const Vec3 x = o + t * d;
    const double s0 = (b - a).cross(x - a).dot(n);
    const double s1 = (c - b).cross(x - b).dot(n);
    const double s2 = (a - c).cross(x - c).dot(n);
    if (s0 < 0.0 || s1 < 0.0 || s2 < 0.0) continue;
    if (t < best.t - 1e-12) {
      best.t = t;
      best.faces = {f};
    } else if (std::abs(t - best.t) <= 1e-12) {
      best.faces.push_back(f);
    }
  }
  return best;
}

/// Whether a triangle meets a box: clip the triangle polygon against the six
/// box slabs in box coordinates and check something survives. `inflate`
/// grows (or shrinks, when negative) the box.
inline bool clip_overlap(const Vec3& center, const Mat3& axes, const Vec3& half, const Vec3& a,
                         const Vec3& b, const Vec3& c, double inflate) {
  std::vector<Vec3> poly{axes.transpose() * (a - center), axes.transpose() * (b - center),
                         axes.transpose() * (c - center)};
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      const double limit = half[axis] + inflate;
      std::vector<Vec3> out;
      for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec3& p = poly[i];
        const Vec3& q = poly[(i + 1) % poly.size()];
        const double dp = limit - sign * p[axis];
        const double dq = limit - sign * q[axis];
        if (dp >= 0.0) out.push_back(p);
        if ((dp >= 0.0) != (dq >= 0.0)) out.push_back(p + (dp / (dp - dq)) * (q - p));
      }
      poly = std::move(out);
      if (poly.empty()) return false;
    }
  }
  return true;
}

/// Sequential pose filter plus a plain argmin; the first of equally distant
/// poses wins. Ring offsets tie exactly in distance, so the comparison uses
/// the library metric (checked separately against the matrix form) to make
/// the tie-break bit-exact.
inline std::optional<std::size_t> brute_force_suggestion(const SceneModel& scene, const GripperProxy& proxy,
                                                         const std::vector<Pose>& poses, const Pose& anchor,
                                                         double beta, ObjectIndex exclude = kNoObject) {
  std::optional<std::size_t> best;
  double best_d = 0.0;
  for (std::size_t i = 0; i < poses.size(); ++i) {
    if (overlaps(scene, proxy, poses[i], exclude)) continue;
    const double d = pose_distance_squared(poses[i], anchor, beta);
    if (!best || d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

/// Pose of the end effector hovering over `target` at `height`, pointing down
/// with a random yaw and a tilt of at most `max_tilt` radians.
inline Pose pointing_pose(std::mt19937_64& rng, const Vec3& target, double height, double max_tilt) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Quat down(0.0, 1.0, 0.0, 0.0);
  const Quat yaw(Eigen::AngleAxisd(std::numbers::pi * u(rng), Vec3::UnitZ()));
  const Quat tilt(Eigen::AngleAxisd(max_tilt * std::abs(u(rng)), Vec3(u(rng), u(rng), 0.0).normalized()));
  Pose pose;
  pose.q = (tilt * yaw * down).normalized();
  pose.p = target - height * pose.axis_z();
  return pose;
}

}  // namespace testsupport
