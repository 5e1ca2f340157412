#include "teleassist/se3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace teleassist {

Pose Pose::from_matrix(const Vec3& p, const Mat3& r) {
  Pose out;
  out.p = p;
  out.q = Quat(r).normalized();
  return out;
}

Pose Pose::inverse() const {
  Pose out;
  out.q = q.conjugate();
  out.p = -(out.q * p);
  return out;
}

Pose Pose::operator*(const Pose& rhs) const {
  Pose out;
  out.q = (q * rhs.q).normalized();
  out.p = p + q * rhs.p;
  return out;
}

Pose Pose::canonical() const {
  Pose out = *this;
  out.q.normalize();
  if (out.q.w() < 0.0) out.q.coeffs() = -out.q.coeffs();
  return out;
}

namespace {

// 1 - (x . y)^2 for unit quaternions, written so that identical inputs give 0.
double one_minus_dot_squared(const Quat& x, const Quat& y) {
  const double minus = (x.coeffs() - y.coeffs()).squaredNorm();
  const double plus = (x.coeffs() + y.coeffs()).squaredNorm();
  return std::clamp(0.25 * minus * plus, 0.0, 1.0);
}

}  // namespace

double relative_rotation_trace(const Quat& x, const Quat& y) {
  // tr(R(y)^T R(x)) = 1 + 2 cos(angle) = 4 (x . y)^2 - 1.
  return 3.0 - 4.0 * one_minus_dot_squared(x, y);
}

double pose_distance_squared(const Pose& x, const Pose& y, double beta,
                             TranslationTerm term) {
  const double dp = (x.p - y.p).norm();
  const double translation = term == TranslationTerm::AsPrinted ? dp : dp * dp;
  // 1 - tr / 3 = 4 (1 - (x . y)^2) / 3
  const double rotation = 2.0 * beta * beta * (4.0 / 3.0) * one_minus_dot_squared(x.q, y.q);
  return translation + rotation;
}

double pose_distance(const Pose& x, const Pose& y, double beta,
                     TranslationTerm term) {
  return std::sqrt(pose_distance_squared(x, y, beta, term));
}

PlaneProjection project_onto_plane(const Vec3& v, const Vec3& n) {
  PlaneProjection out;
  out.v = v - v.dot(n) * n;
  if (out.v.norm() < 1e-8) {
    out.v.setZero();
    out.degenerate = true;
  }
  return out;
}

Quat minimal_rotation_between(const Vec3& from, const Vec3& to) {
  const double d = from.dot(to);
  if (d < -1.0 + 1e-8) {
    int k = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(from[i]) < std::abs(from[k])) k = i;
    }
    const Vec3 axis = from.cross(Vec3::Unit(k)).normalized();
    return Quat(0.0, axis.x(), axis.y(), axis.z());
  }
  const Vec3 c = from.cross(to);
  return Quat(1.0 + d, c.x(), c.y(), c.z()).normalized();
}

double rotation_angle(const Quat& q) {
  const double s = q.vec().norm();
  return 2.0 * std::atan2(s, std::abs(q.w()));
}

Quat exp_so3(const Vec3& w) {
  const double theta = w.norm();
  const double half = 0.5 * theta;
  if (theta < 1e-8) {
    const double t2 = theta * theta;
    const Vec3 v = w * (0.5 - t2 / 48.0);
    return Quat(1.0 - t2 / 8.0, v.x(), v.y(), v.z()).normalized();
  }
  const Vec3 v = w * (std::sin(half) / theta);
  return Quat(std::cos(half), v.x(), v.y(), v.z());
}

Vec3 log_so3(const Quat& q_in) {
  Quat q = q_in.normalized();
  if (q.w() < 0.0) q.coeffs() = -q.coeffs();
  const double s = q.vec().norm();
  if (s < 1e-12) return 2.0 * q.vec();
  const double angle = 2.0 * std::atan2(s, q.w());
  return q.vec() * (angle / s);
}

Pose integrate_twist(const Pose& pose, const Twist& twist, double dt,
                     TwistFrame frame) {
  if (!(dt > 0.0)) throw std::invalid_argument("integrate_twist: dt must be positive");
  Pose out;
  out.p = frame == TwistFrame::World ? Vec3(pose.p + twist.linear * dt)
                                     : Vec3(pose.p + pose.q * (twist.linear * dt));
  if (twist.angular.isZero(0.0)) {
    out.q = pose.q;
    return out;
  }
  const Quat step = exp_so3(twist.angular * dt);
  out.q = frame == TwistFrame::World ? (step * pose.q).normalized() : (pose.q * step).normalized();
  return out;
}

Pose lowpass_pose(const Pose& prev, const Pose& target, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("lowpass_pose: alpha must lie in (0, 1]");
  }
  if (alpha == 1.0) return target;
  Pose out;
  out.p = prev.p + alpha * (target.p - prev.p);
  if (prev.q.coeffs() == target.q.coeffs()) {
    out.q = prev.q;
  } else {
    out.q = prev.q.slerp(alpha, target.q).normalized();
  }
  return out;
}

std::array<double, 7> to_array7(const Pose& pose) {
  const Pose c = pose.canonical();
  return {c.p.x(), c.p.y(), c.p.z(), c.q.x(), c.q.y(), c.q.z(), c.q.w()};
}

Pose from_array7(std::span<const double> v) {
  if (v.size() != 7) throw std::invalid_argument("pose must have 7 numbers");
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument("pose has non-finite entry");
  }
  Pose out;
  out.p = Vec3(v[0], v[1], v[2]);
  out.q = Quat(v[6], v[3], v[4], v[5]);
  if (out.q.norm() < 1e-9) throw std::invalid_argument("pose quaternion has zero norm");
  return out.canonical();
}

}  // namespace teleassist
