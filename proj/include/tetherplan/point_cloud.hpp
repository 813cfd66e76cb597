#pragma once

#include <string>
#include <vector>

#include "tetherplan/geometry.hpp"

namespace tetherplan {

struct PointCloud {
  std::vector<Vec3> points;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

/// Loads an ASCII point cloud, one "x y z" triple per non-blank line.
/// Throws std::runtime_error naming the offending line on malformed input.
PointCloud load_point_cloud(const std::string& path);

}  // namespace tetherplan
