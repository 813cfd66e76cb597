#include "tetherplan/sdf_grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tetherplan {

namespace {

constexpr double kInf = 1e30;

// 1D squared-distance transform (lower envelope of parabolas), unit spacing.
void edt_1d(const std::vector<double>& f, std::vector<double>& out,
            std::vector<int>& v, std::vector<double>& z) {
  const int n = static_cast<int>(f.size());
  int k = 0;
  v[0] = 0;
  z[0] = -kInf;
  z[1] = kInf;
  for (int q = 1; q < n; ++q) {
    double s = ((f[q] + q * (double)q) - (f[v[k]] + v[k] * (double)v[k])) /
               (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + q * (double)q) - (f[v[k]] + v[k] * (double)v[k])) /
          (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = kInf;
  }
  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[k + 1] < q) ++k;
    const double d = q - v[k];
    out[q] = d * d + f[v[k]];
  }
}

}  // namespace

SdfGrid build_sdf(const PointCloud& cloud, const Aabb& bounds,
                  double resolution, double truncation) {
  if (resolution <= 0.0) {
    throw std::invalid_argument("build_sdf: resolution must be > 0");
  }
  if (truncation < resolution) {
    throw std::invalid_argument("build_sdf: truncation must be >= resolution");
  }
  if (bounds.degenerate()) {
    throw std::invalid_argument("build_sdf: degenerate bounds");
  }

  SdfGrid g;
  g.origin_ = bounds.min;
  g.resolution_ = resolution;
  g.truncation_ = truncation;
  const Vec3 extent = bounds.extent();
  for (int a = 0; a < 3; ++a) {
    g.dims_[a] = std::max(1, static_cast<int>(std::ceil(extent[a] / resolution)));
  }
  const std::size_t total = static_cast<std::size_t>(g.dims_.x()) *
                            g.dims_.y() * g.dims_.z();
  g.occupied_.assign(total, 0);

  for (const Vec3& p : cloud.points) {
    const Vec3 rel = (p - g.origin_) / resolution;
    const int ix = static_cast<int>(std::floor(rel.x()));
    const int iy = static_cast<int>(std::floor(rel.y()));
    const int iz = static_cast<int>(std::floor(rel.z()));
    if (ix < 0 || iy < 0 || iz < 0 || ix >= g.dims_.x() || iy >= g.dims_.y() ||
        iz >= g.dims_.z()) {
      ++g.clipped_points_;
      continue;
    }
    g.occupied_[g.index(ix, iy, iz)] = 1;
  }
  g.occupied_count_ =
      static_cast<std::size_t>(std::count(g.occupied_.begin(), g.occupied_.end(), 1));
  g.all_free_warning_ = !cloud.empty() && g.occupied_count_ == 0;

  // Squared distances in voxel units, swept once per axis.
  std::vector<double> d2(total);
  for (std::size_t i = 0; i < total; ++i) d2[i] = g.occupied_[i] ? 0.0 : kInf;

  const int nx = g.dims_.x(), ny = g.dims_.y(), nz = g.dims_.z();
  const int nmax = std::max({nx, ny, nz});
  std::vector<double> f(nmax), out(nmax);
  std::vector<int> v(nmax);
  std::vector<double> z(nmax + 1);

  // x lines
  for (int izv = 0; izv < nz; ++izv) {
    for (int iyv = 0; iyv < ny; ++iyv) {
      const std::size_t base = g.index(0, iyv, izv);
      for (int ix = 0; ix < nx; ++ix) f[ix] = d2[base + ix];
      f.resize(nx);
      out.resize(nx);
      edt_1d(f, out, v, z);
      for (int ix = 0; ix < nx; ++ix) d2[base + ix] = out[ix];
      f.resize(nmax);
      out.resize(nmax);
    }
  }
  // y lines
  const std::size_t stride_y = static_cast<std::size_t>(nx);
  for (int izv = 0; izv < nz; ++izv) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t base = g.index(ix, 0, izv);
      for (int iy = 0; iy < ny; ++iy) f[iy] = d2[base + iy * stride_y];
      f.resize(ny);
      out.resize(ny);
      edt_1d(f, out, v, z);
      for (int iy = 0; iy < ny; ++iy) d2[base + iy * stride_y] = out[iy];
      f.resize(nmax);
      out.resize(nmax);
    }
  }
  // z lines
  const std::size_t stride_z = static_cast<std::size_t>(nx) * ny;
  for (int iyv = 0; iyv < ny; ++iyv) {
    for (int ix = 0; ix < nx; ++ix) {
      const std::size_t base = g.index(ix, iyv, 0);
      for (int iz = 0; iz < nz; ++iz) f[iz] = d2[base + iz * stride_z];
      f.resize(nz);
      out.resize(nz);
      edt_1d(f, out, v, z);
      for (int iz = 0; iz < nz; ++iz) d2[base + iz * stride_z] = out[iz];
      f.resize(nmax);
      out.resize(nmax);
    }
  }

  g.values_.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    if (g.occupied_[i]) {
      g.values_[i] = 0.0f;
    } else if (d2[i] >= kInf) {
      g.values_[i] = static_cast<float>(truncation);
    } else {
      const double d = resolution * std::sqrt(d2[i]);
      g.values_[i] = static_cast<float>(std::min(truncation, d));
    }
  }
  return g;
}

double SdfGrid::distance_at(const Vec3& p) const {
  if (values_.empty()) return truncation_;
  if (!bounds().contains(p)) return truncation_;
  // Trilinear interpolation over voxel centers, clamped at the border band.
  const Vec3 u = (p - origin_) / resolution_ - Vec3::Constant(0.5);
  int ix = static_cast<int>(std::floor(u.x()));
  int iy = static_cast<int>(std::floor(u.y()));
  int iz = static_cast<int>(std::floor(u.z()));
  double tx = u.x() - ix, ty = u.y() - iy, tz = u.z() - iz;
  const auto clamp_cell = [](int& i, double& t, int n) {
    if (n == 1) {
      i = 0;
      t = 0.0;
      return;
    }
    if (i < 0) {
      i = 0;
      t = 0.0;
    } else if (i > n - 2) {
      i = n - 2;
      t = 1.0;
    }
  };
  clamp_cell(ix, tx, dims_.x());
  clamp_cell(iy, ty, dims_.y());
  clamp_cell(iz, tz, dims_.z());

  const int sx = dims_.x() > 1 ? 1 : 0;
  const int sy = dims_.y() > 1 ? 1 : 0;
  const int sz = dims_.z() > 1 ? 1 : 0;
  const auto val = [&](int dx, int dy, int dz) {
    return static_cast<double>(
        values_[index(ix + dx * sx, iy + dy * sy, iz + dz * sz)]);
  };
  const double c00 = val(0, 0, 0) * (1 - tx) + val(1, 0, 0) * tx;
  const double c10 = val(0, 1, 0) * (1 - tx) + val(1, 1, 0) * tx;
  const double c01 = val(0, 0, 1) * (1 - tx) + val(1, 0, 1) * tx;
  const double c11 = val(0, 1, 1) * (1 - tx) + val(1, 1, 1) * tx;
  const double c0 = c00 * (1 - ty) + c10 * ty;
  const double c1 = c01 * (1 - ty) + c11 * ty;
  return c0 * (1 - tz) + c1 * tz;
}

bool SdfGrid::is_in_collision(const Vec3& p, double margin) const {
  return distance_at(p) < margin;
}

bool SdfGrid::line_of_sight(const Vec3& a, const Vec3& b, double margin) const {
  if (occupied_count_ == 0) return truncation_ >= margin;
  const double len = (b - a).norm();
  const double step = resolution_ > 0.0 ? resolution_ * 0.5 : len;
  const int n = std::max(1, static_cast<int>(std::ceil(len / std::max(step, 1e-9))));
  for (int k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) / n;
    if (distance_at(a + (b - a) * t) < margin) return false;
  }
  return true;
}

}  // namespace tetherplan
