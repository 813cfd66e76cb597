#include "tetherplan/geometry.hpp"

#include <algorithm>

namespace tetherplan {

double polyline_length(const std::vector<Vec3>& points) {
  double len = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    len += (points[i] - points[i - 1]).norm();
  }
  return len;
}

std::vector<Vec3> segment_interior_samples(const Vec3& a, const Vec3& b,
                                           double delta) {
  std::vector<Vec3> out;
  const double len = (b - a).norm();
  if (len <= delta || delta <= 0.0) return out;
  const int segments = static_cast<int>(std::ceil(len / delta));
  out.reserve(segments - 1);
  for (int k = 1; k < segments; ++k) {
    const double t = static_cast<double>(k) / segments;
    out.push_back(a + (b - a) * t);
  }
  return out;
}

std::vector<Vec3> resample_polyline(const std::vector<Vec3>& points,
                                    double delta) {
  if (points.size() < 2) return points;
  std::vector<Vec3> out;
  out.push_back(points.front());
  for (std::size_t i = 1; i < points.size(); ++i) {
    for (const Vec3& p : segment_interior_samples(points[i - 1], points[i], delta)) {
      out.push_back(p);
    }
    out.push_back(points[i]);
  }
  return out;
}

std::vector<Vec3> dedupe_polyline(const std::vector<Vec3>& points, double eps) {
  std::vector<Vec3> out;
  for (const Vec3& p : points) {
    if (out.empty() || (p - out.back()).norm() >= eps) out.push_back(p);
  }
  if (out.empty() && !points.empty()) out.push_back(points.front());
  return out;
}

Vec3 closest_point_on_segment(const Vec3& a, const Vec3& b, const Vec3& p) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return a;
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

double point_segment_distance(const Vec3& a, const Vec3& b, const Vec3& p) {
  return (p - closest_point_on_segment(a, b, p)).norm();
}

}  // namespace tetherplan
