#include "tetherplan/point_cloud.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tetherplan {

PointCloud load_point_cloud(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open point cloud file: " + path);
  }
  PointCloud cloud;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    double x, y, z;
    if (!(ss >> x)) {
      // blank (or whitespace-only) lines are allowed
      std::istringstream probe(line);
      std::string tok;
      if (!(probe >> tok)) continue;
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'x y z'");
    }
    if (!(ss >> y >> z)) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected 'x y z'");
    }
    std::string trailing;
    if (ss >> trailing) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": trailing data after 'x y z'");
    }
    cloud.points.emplace_back(x, y, z);
  }
  return cloud;
}

}  // namespace tetherplan
