#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "odis/parallel.hpp"
#include "odis/transform.hpp"

namespace odis {

struct CameraIntrinsics {
  double fx = 0.0, fy = 0.0;  // focal lengths, px
  double cx = 0.0, cy = 0.0;  // principal point, px
  int width = 0, height = 0;

  [[nodiscard]] bool valid() const {
    return fx > 0 && fy > 0 && cx >= 0 && cx < width && cy >= 0 && cy < height;
  }
};

/// One RGB-D frame. Depth in mm with 0 marking invalid pixels; the color
/// plane is optional and not consumed by the pipeline itself.
struct RgbdFrame {
  CameraIntrinsics intrinsics;
  std::vector<std::array<std::uint8_t, 3>> color;  // row-major, may be empty
  std::vector<double> depth;                       // row-major, mm

  [[nodiscard]] double depth_at(int u, int v) const {
    return depth[std::size_t(v) * intrinsics.width + u];
  }
  [[nodiscard]] bool in_bounds(int u, int v) const {
    return u >= 0 && u < intrinsics.width && v >= 0 && v < intrinsics.height;
  }
};

/// A salient scene point: sub-pixel image location, lifted 3D position (mm),
/// unit surface normal, fixed-length appearance descriptor.
struct Keypoint3D {
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
  Vec3 position = Vec3::Zero();
  Vec3 normal = -Vec3::UnitZ();
  Eigen::VectorXd descriptor;
};

/// A 2D keypoint awaiting depth lift.
struct Keypoint2D {
  double u = 0.0, v = 0.0;
  Eigen::VectorXd descriptor;
};

inline Vec3 backproject(const CameraIntrinsics& intr, double u, double v, double depth_mm) {
  if (depth_mm <= 0.0) throw std::invalid_argument("backproject: depth must be positive");
  return {(u - intr.cx) * depth_mm / intr.fx, (v - intr.cy) * depth_mm / intr.fy, depth_mm};
}

/// Exact inverse of backproject; returns (u, v, depth).
inline Vec3 project(const CameraIntrinsics& intr, const Vec3& p) {
  return {intr.cx + p.x() * intr.fx / p.z(), intr.cy + p.y() * intr.fy / p.z(), p.z()};
}

/// Unit normal of the best-fit plane over valid back-projected depth pixels in
/// a window x window neighborhood, oriented toward the camera. When the depth
/// range in the window exceeds 50mm the fit is restricted to pixels within
/// 25mm of the center depth, so normals do not smear across occlusion edges.
/// Throws std::invalid_argument with fewer than 3 supporting pixels.
inline Vec3 estimate_normal(const RgbdFrame& frame, double u, double v, int window = 11) {
  if (window < 3 || window % 2 == 0) throw std::invalid_argument("estimate_normal: window must be odd and >= 3");
  const int cu = int(std::lround(u));
  const int cv = int(std::lround(v));
  if (!frame.in_bounds(cu, cv)) throw std::invalid_argument("estimate_normal: pixel out of bounds");
  const double center_depth = frame.depth_at(cu, cv);
  if (center_depth <= 0.0) throw std::invalid_argument("estimate_normal: invalid center depth");

  const int half = window / 2;
  double min_depth = center_depth, max_depth = center_depth;
  for (int dv = -half; dv <= half; ++dv) {
    for (int du = -half; du <= half; ++du) {
      const int px = cu + du, py = cv + dv;
      if (!frame.in_bounds(px, py)) continue;
      const double d = frame.depth_at(px, py);
      if (d <= 0.0) continue;
      min_depth = std::min(min_depth, d);
      max_depth = std::max(max_depth, d);
    }
  }
  const bool clip = (max_depth - min_depth) > 50.0;

  Vec3 mean = Vec3::Zero();
  std::vector<Vec3> points;
  points.reserve(std::size_t(window) * window);
  for (int dv = -half; dv <= half; ++dv) {
    for (int du = -half; du <= half; ++du) {
      const int px = cu + du, py = cv + dv;
      if (!frame.in_bounds(px, py)) continue;
      const double d = frame.depth_at(px, py);
      if (d <= 0.0) continue;
      if (clip && std::abs(d - center_depth) > 25.0) continue;
      points.push_back(backproject(frame.intrinsics, px, py, d));
      mean += points.back();
    }
  }
  if (points.size() < 3) throw std::invalid_argument("estimate_normal: insufficient support");
  mean /= double(points.size());

  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : points) {
    const Vec3 c = p - mean;
    cov += c * c.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  Vec3 normal = eig.eigenvectors().col(0);  // smallest principal component
  const Vec3 position = backproject(frame.intrinsics, u, v, center_depth);
  if (normal.dot(position) > 0.0) normal = -normal;
  return normal.normalized();
}

struct LiftResult {
  std::vector<Keypoint3D> keypoints;
  std::size_t dropped = 0;
};

/// Lifts 2D keypoints into 3D using the nearest depth pixel. Keypoints on
/// invalid depth or with failed normal estimation are dropped; order of the
/// survivors matches the input order for any worker count.
inline LiftResult lift_keypoints(const RgbdFrame& frame, const std::vector<Keypoint2D>& kps,
                                 int window = 11, unsigned threads = 1) {
  std::vector<char> ok(kps.size(), 0);
  std::vector<Keypoint3D> lifted(kps.size());
  parallel_chunks(kps.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Keypoint2D& kp = kps[i];
      const int cu = int(std::lround(kp.u));
      const int cv = int(std::lround(kp.v));
      if (!frame.in_bounds(cu, cv)) continue;
      const double d = frame.depth_at(cu, cv);
      if (d <= 0.0) continue;
      try {
        Keypoint3D out;
        out.pixel = Eigen::Vector2d(kp.u, kp.v);
        out.position = backproject(frame.intrinsics, kp.u, kp.v, d);
        out.normal = estimate_normal(frame, kp.u, kp.v, window);
        out.descriptor = kp.descriptor;
        lifted[i] = std::move(out);
        ok[i] = 1;
      } catch (const std::invalid_argument&) {
        // dropped below
      }
    }
  });
  LiftResult result;
  result.keypoints.reserve(kps.size());
  for (std::size_t i = 0; i < kps.size(); ++i) {
    if (ok[i]) {
      result.keypoints.push_back(std::move(lifted[i]));
    } else {
      ++result.dropped;
    }
  }
  return result;
}

}  // namespace odis
