#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include "odis/transform.hpp"

namespace odis {

using Triangle = std::array<Vec3, 3>;

/// Point pair feature of two oriented surface points m1, m2 with unit normals
/// n1, n2 and baseline d = m2 - m1: (||d||, angle(n1,d), angle(n2,d), angle(n1,n2)).
/// Invariant under a common rigid motion of both points and normals.
struct PointPairFeature {
  double dist = 0.0;        // mm
  double angle_n1_d = 0.0;  // rad, [0, pi]
  double angle_n2_d = 0.0;  // rad, [0, pi]
  double angle_n1_n2 = 0.0; // rad, [0, pi]
};

inline PointPairFeature compute_ppf(const Vec3& m1, const Vec3& n1, const Vec3& m2, const Vec3& n2) {
  const Vec3 d = m2 - m1;
  const double len = d.norm();
  if (len < 1e-9) throw std::invalid_argument("compute_ppf: coincident points, angles undefined");
  return {len, angle_between(n1, d), angle_between(n2, d), angle_between(n1, n2)};
}

inline bool ppf_compatible(const PointPairFeature& a, const PointPairFeature& b,
                           double dist_tol, double angle_tol) {
  return std::abs(a.dist - b.dist) <= dist_tol &&
         std::abs(a.angle_n1_d - b.angle_n1_d) <= angle_tol &&
         std::abs(a.angle_n2_d - b.angle_n2_d) <= angle_tol &&
         std::abs(a.angle_n1_n2 - b.angle_n1_n2) <= angle_tol;
}

/// Edge vectors in cyclic vertex order.
inline std::array<Vec3, 3> triangle_edges(const Triangle& t) {
  return {t[1] - t[0], t[2] - t[1], t[0] - t[2]};
}

/// Every edge length within [min_edge, max_edge] and every interior angle at
/// least min_angle (radians).
inline bool triangle_valid(const Triangle& t, double min_edge, double max_edge, double min_angle) {
  for (const Vec3& e : triangle_edges(t)) {
    const double len = e.norm();
    if (len < min_edge || len > max_edge) return false;
  }
  for (int i = 0; i < 3; ++i) {
    const Vec3 a = t[(i + 1) % 3] - t[i];
    const Vec3 b = t[(i + 2) % 3] - t[i];
    if (angle_between(a, b) < min_angle) return false;
  }
  return true;
}

/// Orientation consistency of a triangle correspondence (vertex k of p matched
/// to vertex k of q). For each edge pair (i, j) the cross products of the two
/// triangles are compared; the match is rejected when some pair points in
/// opposite directions, i.e. ||v_ij(p)/||.|| + v_ij(q)/||.|| || < eps. Rejects
/// reflected (vertex-swapped) correspondences. eps <= 0 disables the test.
inline bool sidedness_consistent(const Triangle& p, const Triangle& q, double eps) {
  if (eps <= 0.0) return true;
  const auto ep = triangle_edges(p);
  const auto eq = triangle_edges(q);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const Vec3 vp = ep[i].cross(ep[j]);
      const Vec3 vq = eq[i].cross(eq[j]);
      if (vp.norm() < 1e-9 || vq.norm() < 1e-9) {
        throw std::invalid_argument("sidedness_consistent: degenerate triangle");
      }
      if ((vp.normalized() + vq.normalized()).norm() < eps) return false;
    }
  }
  return true;
}

/// Bidirectional pose distance between two triplet matches (P, Q) and (A, B):
/// sum_i ||T_pq(a_i) - b_i|| + sum_i ||T_ab(p_i) - q_i||. Symmetric and
/// non-negative; zero when both matches share one exact transform.
inline double triplet_pair_distance(const RigidTransform& t_pq, const RigidTransform& t_ab,
                                    const Triangle& p, const Triangle& q,
                                    const Triangle& a, const Triangle& b) {
  double d = 0.0;
  for (int i = 0; i < 3; ++i) {
    d += (t_pq(a[i]) - b[i]).norm();
    d += (t_ab(p[i]) - q[i]).norm();
  }
  return d;
}

namespace detail {

/// Point known to lie (near) the triangle plane: inside test with a signed
/// distance slack of tol mm against each edge.
inline bool point_in_triangle(const Vec3& x, const Triangle& t, double tol) {
  Vec3 n = (t[1] - t[0]).cross(t[2] - t[0]);
  const double nn = n.norm();
  if (nn < 1e-12) return false;
  n /= nn;
  for (int i = 0; i < 3; ++i) {
    const Vec3& a = t[i];
    const Vec3& b = t[(i + 1) % 3];
    const Vec3 inward = n.cross(b - a);
    const double il = inward.norm();
    if (il < 1e-12) continue;
    if (inward.dot(x - a) / il < -tol) return false;
  }
  return true;
}

/// 2D segment intersection evaluated in the plane with normal n.
inline bool segments_intersect_in_plane(const Vec3& p1, const Vec3& p2, const Vec3& p3,
                                        const Vec3& p4, const Vec3& n, double tol) {
  auto side = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
    return n.dot((b - a).cross(c - a));
  };
  const double d1 = side(p3, p4, p1);
  const double d2 = side(p3, p4, p2);
  const double d3 = side(p1, p2, p3);
  const double d4 = side(p1, p2, p4);
  const double scale = std::max({(p2 - p1).norm(), (p4 - p3).norm(), 1.0});
  const double area_tol = tol * scale;
  if (((d1 > area_tol && d2 < -area_tol) || (d1 < -area_tol && d2 > area_tol)) &&
      ((d3 > area_tol && d4 < -area_tol) || (d3 < -area_tol && d4 > area_tol))) {
    return true;
  }
  // collinear / touching cases: endpoint on the other segment
  auto on_segment = [&](const Vec3& a, const Vec3& b, const Vec3& c) {
    if (std::abs(side(a, b, c)) > area_tol) return false;
    const Vec3 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 < 1e-24) return (c - a).norm() <= tol;
    const double s = ab.dot(c - a) / len2;
    return s >= -tol && s <= 1.0 + tol && (c - (a + s * ab)).norm() <= tol * scale;
  };
  return on_segment(p3, p4, p1) || on_segment(p3, p4, p2) ||
         on_segment(p1, p2, p3) || on_segment(p1, p2, p4);
}

inline bool segment_hits_triangle(const Vec3& a, const Vec3& b, const Triangle& t, double tol) {
  Vec3 n = (t[1] - t[0]).cross(t[2] - t[0]);
  const double nn = n.norm();
  if (nn < 1e-12) return false;
  n /= nn;
  const double da = n.dot(a - t[0]);
  const double db = n.dot(b - t[0]);
  if (da > tol && db > tol) return false;
  if (da < -tol && db < -tol) return false;
  if (std::abs(da) <= tol && std::abs(db) <= tol) {
    // segment lies in the triangle plane
    if (point_in_triangle(a, t, tol) || point_in_triangle(b, t, tol)) return true;
    for (int i = 0; i < 3; ++i) {
      if (segments_intersect_in_plane(a, b, t[i], t[(i + 1) % 3], n, tol)) return true;
    }
    return false;
  }
  const double denom = da - db;
  if (std::abs(denom) < 1e-15) return false;
  double s = da / denom;
  s = std::clamp(s, 0.0, 1.0);
  const Vec3 x = a + s * (b - a);
  return point_in_triangle(x, t, tol);
}

inline bool coplanar_triangles_overlap(const Triangle& p, const Triangle& q, const Vec3& n,
                                       double tol) {
  for (int i = 0; i < 3; ++i) {
    if (point_in_triangle(p[i], q, tol)) return true;
    if (point_in_triangle(q[i], p, tol)) return true;
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (segments_intersect_in_plane(p[i], p[(i + 1) % 3], q[j], q[(j + 1) % 3], n, tol)) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace detail

/// Full 3D triangle-triangle intersection with a small contact tolerance.
/// Shared vertices and edge touches count as overlap.
inline bool triangles_overlap(const Triangle& p, const Triangle& q, double tol = 1e-6) {
  Vec3 np = (p[1] - p[0]).cross(p[2] - p[0]);
  Vec3 nq = (q[1] - q[0]).cross(q[2] - q[0]);
  const double lp = np.norm();
  const double lq = nq.norm();
  if (lp >= 1e-12 && lq >= 1e-12) {
    np /= lp;
    nq /= lq;
    double dp[3];
    double dq[3];
    bool p_above = true, p_below = true, q_above = true, q_below = true;
    for (int i = 0; i < 3; ++i) {
      dp[i] = nq.dot(p[i] - q[0]);
      dq[i] = np.dot(q[i] - p[0]);
      p_above &= dp[i] > tol;
      p_below &= dp[i] < -tol;
      q_above &= dq[i] > tol;
      q_below &= dq[i] < -tol;
    }
    if (p_above || p_below || q_above || q_below) return false;
    const bool coplanar = std::abs(dp[0]) <= tol && std::abs(dp[1]) <= tol && std::abs(dp[2]) <= tol;
    if (coplanar) return detail::coplanar_triangles_overlap(p, q, nq, tol);
  }
  for (int i = 0; i < 3; ++i) {
    if (detail::segment_hits_triangle(p[i], p[(i + 1) % 3], q, tol)) return true;
    if (detail::segment_hits_triangle(q[i], q[(i + 1) % 3], p, tol)) return true;
  }
  return false;
}

}  // namespace odis
