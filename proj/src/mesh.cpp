#include "tetherplan/mesh.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tetherplan {

void finalize_mesh(TriangleMesh& mesh) {
  mesh.normals.clear();
  mesh.centroids.clear();
  mesh.normals.reserve(mesh.triangles.size());
  mesh.centroids.reserve(mesh.triangles.size());
  const int nv = static_cast<int>(mesh.vertices.size());
  for (const auto& t : mesh.triangles) {
    for (int idx : t) {
      if (idx < 0 || idx >= nv) {
        throw std::invalid_argument("mesh: vertex index out of range");
      }
    }
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    if (len <= 1e-12) {
      throw std::invalid_argument("mesh: degenerate triangle");
    }
    mesh.normals.push_back(n / len);
    mesh.centroids.push_back((a + b + c) / 3.0);
  }
}

TriangleMesh load_obj_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open mesh file: " + path);
  }
  TriangleMesh mesh;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key)) continue;
    if (key[0] == '#') continue;
    if (key == "v") {
      double x, y, z;
      if (!(ss >> x >> y >> z)) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected 'v x y z'");
      }
      mesh.vertices.emplace_back(x, y, z);
    } else if (key == "f") {
      int i, j, k;
      if (!(ss >> i >> j >> k)) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": expected 'f i j k' (triangles only)");
      }
      int extra;
      if (ss >> extra) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": only triangular faces are supported");
      }
      mesh.triangles.push_back({i - 1, j - 1, k - 1});
    } else {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": unsupported keyword '" + key + "'");
    }
  }
  finalize_mesh(mesh);
  return mesh;
}

namespace {

void orthonormal_frame(const Vec3& axis, Vec3& e1, Vec3& e2) {
  const Vec3 a = axis.normalized();
  Vec3 ref = std::abs(a.z()) < 0.9 ? Vec3(0, 0, 1) : Vec3(1, 0, 0);
  e1 = a.cross(ref).normalized();
  e2 = a.cross(e1).normalized();
}

}  // namespace

TriangleMesh make_tube_mesh(const Vec3& base, const Vec3& axis, double radius,
                            double length, int radial_segments,
                            int axial_segments) {
  TriangleMesh mesh;
  const Vec3 dir = axis.normalized();
  Vec3 e1, e2;
  orthonormal_frame(dir, e1, e2);
  for (int ia = 0; ia <= axial_segments; ++ia) {
    const double h = length * ia / axial_segments;
    for (int ir = 0; ir < radial_segments; ++ir) {
      const double th = 2.0 * M_PI * ir / radial_segments;
      mesh.vertices.push_back(base + dir * h +
                              radius * (std::cos(th) * e1 + std::sin(th) * e2));
    }
  }
  const auto vid = [&](int ia, int ir) {
    return ia * radial_segments + (ir % radial_segments);
  };
  for (int ia = 0; ia < axial_segments; ++ia) {
    for (int ir = 0; ir < radial_segments; ++ir) {
      const int a = vid(ia, ir), b = vid(ia, ir + 1);
      const int c = vid(ia + 1, ir), d = vid(ia + 1, ir + 1);
      // wound so normals face radially outward
      mesh.triangles.push_back({a, b, d});
      mesh.triangles.push_back({a, d, c});
    }
  }
  finalize_mesh(mesh);
  return mesh;
}

TriangleMesh make_box_mesh(const Vec3& center, const Vec3& half_extents) {
  TriangleMesh mesh;
  const Vec3& h = half_extents;
  for (int sx : {-1, 1})
    for (int sy : {-1, 1})
      for (int sz : {-1, 1})
        mesh.vertices.push_back(center +
                                Vec3(sx * h.x(), sy * h.y(), sz * h.z()));
  // vertex id: bit2 = x+, bit1 = y+, bit0 = z+
  const auto quad = [&](int a, int b, int c, int d) {
    mesh.triangles.push_back({a, b, c});
    mesh.triangles.push_back({a, c, d});
  };
  quad(4, 6, 7, 5);  // +x
  quad(0, 1, 3, 2);  // -x
  quad(2, 3, 7, 6);  // +y
  quad(0, 4, 5, 1);  // -y
  quad(1, 5, 7, 3);  // +z
  quad(0, 2, 6, 4);  // -z
  finalize_mesh(mesh);
  return mesh;
}

}  // namespace tetherplan
