#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace odis {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = std::numbers::pi;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Angle between two vectors in [0, pi]. atan2 form, stable near 0 and pi.
inline double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

/// A 6-DOF rigid-body pose. Rotation is a proper rotation matrix, translation in mm.
/// Acts on points as p -> R p + t.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 operator()(const Vec3& p) const { return rotation * p + translation; }

  static RigidTransform identity() { return {}; }
};

/// compose(a, b) applies b first: compose(a, b)(p) == a(b(p)).
inline RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
}

inline RigidTransform invert(const RigidTransform& t) {
  Mat3 rt = t.rotation.transpose();
  return {rt, -(rt * t.translation)};
}

/// Rotation angle in radians recovered from the trace.
inline double rotation_angle(const Mat3& r) {
  double c = (r.trace() - 1.0) / 2.0;
  return std::acos(std::clamp(c, -1.0, 1.0));
}

/// Angle in radians between the rotations of two transforms.
inline double relative_rotation_angle(const RigidTransform& a, const RigidTransform& b) {
  return rotation_angle(a.rotation * b.rotation.transpose());
}

inline bool is_rotation(const Mat3& r, double tol = 1e-9) {
  Mat3 residual = r.transpose() * r - Mat3::Identity();
  return residual.cwiseAbs().maxCoeff() <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

}  // namespace odis
