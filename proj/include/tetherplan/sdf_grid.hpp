#pragma once

#include <cstdint>
#include <vector>

#include "tetherplan/geometry.hpp"
#include "tetherplan/point_cloud.hpp"

namespace tetherplan {

/// Uniform voxel grid of truncated distances to the nearest occupied voxel
/// center. Occupied voxels (those containing at least one input point) hold
/// 0; free voxels hold min(truncation, exact Euclidean distance). Immutable
/// after construction, so concurrent readers need no synchronization.
class SdfGrid {
 public:
  SdfGrid() = default;

  double distance_at(const Vec3& p) const;
  bool is_in_collision(const Vec3& p, double margin) const;

  /// True iff every sample of [a,b] at step resolution/2 (endpoints
  /// included) keeps distance_at >= margin.
  bool line_of_sight(const Vec3& a, const Vec3& b, double margin) const;

  const Vec3& origin() const { return origin_; }
  double resolution() const { return resolution_; }
  double truncation() const { return truncation_; }
  const Eigen::Vector3i& dims() const { return dims_; }
  Aabb bounds() const {
    return Aabb{origin_, origin_ + resolution_ * dims_.cast<double>()};
  }

  bool occupied(int ix, int iy, int iz) const {
    return occupied_[index(ix, iy, iz)] != 0;
  }
  std::size_t occupied_count() const { return occupied_count_; }
  /// Points in the input cloud that fell outside the grid bounds.
  std::size_t clipped_points() const { return clipped_points_; }
  /// Set when a non-empty cloud produced no occupied voxel.
  bool all_free_warning() const { return all_free_warning_; }

  Vec3 voxel_center(int ix, int iy, int iz) const {
    return origin_ + resolution_ * Vec3(ix + 0.5, iy + 0.5, iz + 0.5);
  }
  double value(int ix, int iy, int iz) const {
    return values_[index(ix, iy, iz)];
  }

  friend SdfGrid build_sdf(const PointCloud& cloud, const Aabb& bounds,
                           double resolution, double truncation);

 private:
  std::size_t index(int ix, int iy, int iz) const {
    return static_cast<std::size_t>(ix) +
           static_cast<std::size_t>(dims_.x()) *
               (static_cast<std::size_t>(iy) +
                static_cast<std::size_t>(dims_.y()) *
                    static_cast<std::size_t>(iz));
  }

  Vec3 origin_{Vec3::Zero()};
  double resolution_ = 0.0;
  double truncation_ = 0.0;
  Eigen::Vector3i dims_{0, 0, 0};
  std::vector<float> values_;
  std::vector<std::uint8_t> occupied_;
  std::size_t occupied_count_ = 0;
  std::size_t clipped_points_ = 0;
  bool all_free_warning_ = false;
};

/// Voxelizes the cloud and runs an exact two-pass Euclidean distance
/// transform (per-axis lower envelope on squared distances).
/// Throws std::invalid_argument on non-positive resolution, truncation
/// < resolution, or degenerate bounds.
SdfGrid build_sdf(const PointCloud& cloud, const Aabb& bounds,
                  double resolution, double truncation);

}  // namespace tetherplan
