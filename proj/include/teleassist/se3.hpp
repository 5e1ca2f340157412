#pragma once

#include <array>
#include <span>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace teleassist {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

/// Rigid transform. Maps points from the local frame into the parent frame:
/// x_parent = q * x_local + p.
struct Pose {
  Vec3 p = Vec3::Zero();
  Quat q = Quat::Identity();

  static Pose identity() { return {}; }
  static Pose from_matrix(const Vec3& p, const Mat3& r);

  Mat3 rotation() const { return q.toRotationMatrix(); }
  Vec3 axis_x() const { return q * Vec3::UnitX(); }
  Vec3 axis_y() const { return q * Vec3::UnitY(); }
  Vec3 axis_z() const { return q * Vec3::UnitZ(); }

  Vec3 transform_point(const Vec3& x) const { return q * x + p; }
  Vec3 rotate(const Vec3& v) const { return q * v; }

  Pose inverse() const;
  Pose operator*(const Pose& rhs) const;

  /// Flips the quaternion sign so that w >= 0 and renormalizes.
  Pose canonical() const;
};

struct Twist {
  Vec3 linear = Vec3::Zero();   // m/s
  Vec3 angular = Vec3::Zero();  // rad/s

  bool is_zero() const { return linear.isZero(0.0) && angular.isZero(0.0); }
  bool all_finite() const { return linear.allFinite() && angular.allFinite(); }
};

enum class TwistFrame { World, Body };

/// Which translation term the pose metric uses. `AsPrinted` is the canonical
/// form: d^2 = |dp| + 2 beta^2 (1 - tr(Ry^T Rx) / 3). `Squared` uses |dp|^2.
enum class TranslationTerm { AsPrinted, Squared };

double pose_distance_squared(const Pose& x, const Pose& y, double beta,
                             TranslationTerm term = TranslationTerm::AsPrinted);
double pose_distance(const Pose& x, const Pose& y, double beta,
                     TranslationTerm term = TranslationTerm::AsPrinted);

/// Trace of the relative rotation Ry^-1 Rx, computed from quaternions.
double relative_rotation_trace(const Quat& x, const Quat& y);

struct PlaneProjection {
  Vec3 v = Vec3::Zero();
  bool degenerate = false;
};

/// Removes the component of v along the unit normal n. Flags the result as
/// degenerate (and zeroes it) when its norm drops below 1e-8.
PlaneProjection project_onto_plane(const Vec3& v, const Vec3& n);

/// Smallest rotation taking unit vector `from` onto unit vector `to`.
/// Antiparallel inputs rotate by pi about from x e_k, where e_k is the world
/// basis vector least aligned with `from`.
Quat minimal_rotation_between(const Vec3& from, const Vec3& to);

/// Rotation angle in [0, pi].
double rotation_angle(const Quat& q);

/// Exact SO(3) exponential of a rotation vector.
Quat exp_so3(const Vec3& rotation_vector);

/// Inverse of exp_so3, returning a rotation vector with angle in [0, pi].
Vec3 log_so3(const Quat& q);

Pose integrate_twist(const Pose& pose, const Twist& twist, double dt,
                     TwistFrame frame = TwistFrame::World);

/// First-order filter coefficient for time constant tau at step dt.
inline double lowpass_alpha(double dt, double tau) { return dt / (tau + dt); }

/// Moves prev toward target by alpha: lerp on position, slerp on rotation.
Pose lowpass_pose(const Pose& prev, const Pose& target, double alpha);

/// 7-number wire form [px, py, pz, qx, qy, qz, qw] with w >= 0.
std::array<double, 7> to_array7(const Pose& pose);
Pose from_array7(std::span<const double> v);

}  // namespace teleassist
