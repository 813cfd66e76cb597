#pragma once

#include <vector>

#include "tetherplan/geometry.hpp"
#include "tetherplan/mesh.hpp"

namespace tetherplan {

struct CameraModel {
  double fov_deg = 70.0;  // full cone angle
  double range = 1.2;     // max inspection distance
};

/// Indices of triangles whose centroid is within range, whose normal faces
/// the camera, and whose bearing lies within the field-of-view cone.
/// No occlusion test.
std::vector<int> visible_triangles(const Vec3& position, const Vec3& view_dir,
                                   const CameraModel& camera,
                                   const TriangleMesh& mesh);

/// Accumulates the set of uniquely observed triangles over a mission.
class CoverageTracker {
 public:
  explicit CoverageTracker(const TriangleMesh& mesh)
      : mesh_(&mesh), seen_(mesh.triangle_count(), 0) {}

  /// Marks currently visible triangles as seen and returns the coverage
  /// ratio. An empty mesh reports full coverage.
  double update_and_ratio(const Vec3& position, const Vec3& view_dir,
                          const CameraModel& camera);

  double ratio() const;
  std::size_t seen_count() const { return seen_count_; }

 private:
  const TriangleMesh* mesh_;
  std::vector<std::uint8_t> seen_;
  std::size_t seen_count_ = 0;
};

}  // namespace tetherplan
