#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace tetherplan {

using Vec3 = Eigen::Vector3d;

/// Axis-aligned box, used for map extents and sampling regions.
struct Aabb {
  Vec3 min{Vec3::Zero()};
  Vec3 max{Vec3::Zero()};

  bool contains(const Vec3& p) const {
    return p.x() >= min.x() && p.x() <= max.x() && p.y() >= min.y() &&
           p.y() <= max.y() && p.z() >= min.z() && p.z() <= max.z();
  }

  Vec3 extent() const { return max - min; }

  bool degenerate() const {
    const Vec3 e = extent();
    return e.x() <= 0.0 || e.y() <= 0.0 || e.z() <= 0.0;
  }

  Aabb inflated(double r) const {
    return Aabb{min - Vec3::Constant(r), max + Vec3::Constant(r)};
  }
};

/// Sum of consecutive segment lengths; 0 for fewer than two points.
double polyline_length(const std::vector<Vec3>& points);

/// Interior samples of segment [a,b] at spacing <= delta (endpoints excluded).
std::vector<Vec3> segment_interior_samples(const Vec3& a, const Vec3& b,
                                           double delta);

/// Resample a polyline so consecutive points are <= delta apart.
/// Original vertices are kept; endpoints are preserved exactly.
std::vector<Vec3> resample_polyline(const std::vector<Vec3>& points,
                                    double delta);

/// Drop consecutive points closer than eps.
std::vector<Vec3> dedupe_polyline(const std::vector<Vec3>& points,
                                  double eps = 1e-6);

/// Closest point on segment [a,b] to p.
Vec3 closest_point_on_segment(const Vec3& a, const Vec3& b, const Vec3& p);

/// Distance from p to segment [a,b].
double point_segment_distance(const Vec3& a, const Vec3& b, const Vec3& p);

inline double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

/// Deterministic 64-bit mix for deriving per-call RNG seeds.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace tetherplan
