#pragma once

#include <Eigen/SVD>

#include <cmath>
#include <span>
#include <stdexcept>

#include "odis/transform.hpp"

namespace odis {

/// Least-squares rigid transform mapping src onto dst: minimizes
/// sum_i ||R src[i] + t - dst[i]||^2 over rotations R and translations t.
/// Closed form via SVD of the cross-covariance, with the determinant sign
/// correction so a proper rotation is returned even for reflected inputs.
/// No scale component. Throws std::invalid_argument for fewer than 3 points
/// or (near) collinear source geometry, where the rotation is not unique.
inline RigidTransform fit_rigid_transform(std::span<const Vec3> src, std::span<const Vec3> dst) {
  const std::size_t n = src.size();
  if (n != dst.size()) throw std::invalid_argument("fit_rigid_transform: point count mismatch");
  if (n < 3) throw std::invalid_argument("fit_rigid_transform: need at least 3 points");

  Vec3 src_mean = Vec3::Zero();
  Vec3 dst_mean = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    src_mean += src[i];
    dst_mean += dst[i];
  }
  src_mean /= double(n);
  dst_mean /= double(n);

  if (n == 3) {
    const double area = 0.5 * (src[1] - src[0]).cross(src[2] - src[0]).norm();
    if (area <= 1e-6) throw std::invalid_argument("fit_rigid_transform: degenerate (collinear) triangle");
  }

  Mat3 covariance = Mat3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    covariance += (dst[i] - dst_mean) * (src[i] - src_mean).transpose();
  }

  Eigen::JacobiSVD<Mat3> svd(covariance, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (sv(1) <= 1e-9 * std::max(1.0, sv(0))) {
    throw std::invalid_argument("fit_rigid_transform: degenerate (collinear) geometry");
  }

  Mat3 sign = Mat3::Identity();
  if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) sign(2, 2) = -1.0;
  const Mat3 rotation = svd.matrixU() * sign * svd.matrixV().transpose();
  return {rotation, dst_mean - rotation * src_mean};
}

/// RMS point-to-point residual of t over a correspondence set, mm.
inline double rigid_rms(const RigidTransform& t, std::span<const Vec3> src, std::span<const Vec3> dst) {
  if (src.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) sum += (t(src[i]) - dst[i]).squaredNorm();
  return std::sqrt(sum / double(src.size()));
}

/// Mean point-to-point residual of t over a correspondence set, mm.
inline double rigid_mean_error(const RigidTransform& t, std::span<const Vec3> src, std::span<const Vec3> dst) {
  if (src.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) sum += (t(src[i]) - dst[i]).norm();
  return sum / double(src.size());
}

}  // namespace odis
