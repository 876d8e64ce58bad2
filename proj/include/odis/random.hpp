#pragma once

#include <cstdint>
#include <random>

#include "odis/transform.hpp"

namespace odis {

/// splitmix64-style mixer used to derive independent sub-seeds from a base
/// seed and a stream index. Results depend only on the two inputs, which keeps
/// seeded runs reproducible no matter how work is partitioned across threads.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline Vec3 random_unit_vector(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Vec3 v;
  do {
    v = Vec3(gauss(rng), gauss(rng), gauss(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}

/// Uniform random rotation (normalized 4-Gaussian quaternion).
inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::Quaterniond q;
  do {
    q = Eigen::Quaterniond(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  } while (q.norm() < 1e-9);
  q.normalize();
  return q.toRotationMatrix();
}

inline RigidTransform random_rigid_transform(std::mt19937_64& rng, double translation_extent) {
  std::uniform_real_distribution<double> span(-translation_extent, translation_extent);
  return {random_rotation(rng), Vec3(span(rng), span(rng), span(rng))};
}

}  // namespace odis
