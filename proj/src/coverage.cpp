#include "tetherplan/coverage.hpp"

#include <cmath>

namespace tetherplan {

std::vector<int> visible_triangles(const Vec3& position, const Vec3& view_dir,
                                   const CameraModel& camera,
                                   const TriangleMesh& mesh) {
  std::vector<int> out;
  const double cos_half_fov = std::cos(camera.fov_deg * M_PI / 180.0 / 2.0);
  for (int t = 0; t < static_cast<int>(mesh.triangle_count()); ++t) {
    const Vec3& c = mesh.centroids[t];
    const Vec3 to_tri = c - position;
    const double dist = to_tri.norm();
    if (dist > camera.range) continue;
    if (mesh.normals[t].dot(position - c) <= 0.0) continue;  // back-facing
    if (dist < 1e-9) continue;
    if (view_dir.dot(to_tri / dist) < cos_half_fov) continue;
    out.push_back(t);
  }
  return out;
}

double CoverageTracker::update_and_ratio(const Vec3& position,
                                         const Vec3& view_dir,
                                         const CameraModel& camera) {
  for (int t : visible_triangles(position, view_dir, camera, *mesh_)) {
    if (!seen_[t]) {
      seen_[t] = 1;
      ++seen_count_;
    }
  }
  return ratio();
}

double CoverageTracker::ratio() const {
  if (mesh_->triangle_count() == 0) return 1.0;
  return static_cast<double>(seen_count_) /
         static_cast<double>(mesh_->triangle_count());
}

}  // namespace tetherplan
