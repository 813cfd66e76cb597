#include "tetherplan/tether.hpp"

#include <cmath>
#include <stdexcept>

namespace tetherplan {

double compute_length(const TetherPath& path) {
  return polyline_length(path.nodes);
}

TetherPath append_rov(const TetherPath& path, const Vec3& p_rov) {
  TetherPath out = path;
  if (out.nodes.empty()) {
    out.nodes.push_back(p_rov);
    return out;
  }
  const Vec3 last = out.nodes.back();
  if ((p_rov - last).norm() < 1e-6) return out;
  for (const Vec3& p : segment_interior_samples(last, p_rov, out.spacing)) {
    out.nodes.push_back(p);
  }
  out.nodes.push_back(p_rov);
  return out;
}

bool check_shortcut(const TetherPath& path, int i, int j, const SdfGrid& grid,
                    double margin) {
  const int n = static_cast<int>(path.nodes.size());
  if (j < 0 || i >= n || j >= i) {
    throw std::out_of_range("check_shortcut: require 0 <= j < i < size");
  }
  return grid.line_of_sight(path.nodes[j], path.nodes[i], margin);
}

TetherPath replace_nodes(const TetherPath& path, int i, int j, double delta) {
  const int n = static_cast<int>(path.nodes.size());
  if (j < 0 || i >= n || j >= i) {
    throw std::out_of_range("replace_nodes: require 0 <= j < i < size");
  }
  TetherPath out;
  out.spacing = path.spacing;
  out.nodes.assign(path.nodes.begin(), path.nodes.begin() + j + 1);
  for (const Vec3& p :
       segment_interior_samples(path.nodes[j], path.nodes[i], delta)) {
    out.nodes.push_back(p);
  }
  out.nodes.insert(out.nodes.end(), path.nodes.begin() + i, path.nodes.end());
  return out;
}

Vec3 pull_node(const Vec3& node, const Vec3& endpoint, double delta) {
  const Vec3 d = endpoint - node;
  const double dist = d.norm();
  if (dist < 1e-12) return node;
  return node + d * (std::min(delta, dist) / dist);
}

namespace {

// In-place variant of replace_nodes; returns the new index of the node that
// was at position i.
int replace_inplace(std::vector<Vec3>& nodes, int i, int j, double delta) {
  std::vector<Vec3> seg = segment_interior_samples(nodes[j], nodes[i], delta);
  nodes.erase(nodes.begin() + j + 1, nodes.begin() + i);
  nodes.insert(nodes.begin() + j + 1, seg.begin(), seg.end());
  return j + static_cast<int>(seg.size()) + 1;
}

}  // namespace

void tether_sweep(TetherPath& path, const SdfGrid& grid,
                  const TetherOptions& opt) {
  auto& nodes = path.nodes;
  int i = static_cast<int>(nodes.size()) - 1;
  while (i >= 1) {
    const bool spans_whole_path = (i == static_cast<int>(nodes.size()) - 1);
    bool any_blocked = false;
    bool replaced_to_anchor = false;
    for (int j = i - 1; j >= 0; --j) {
      if (grid.line_of_sight(nodes[j], nodes[i], opt.margin)) {
        i = replace_inplace(nodes, i, j, opt.spacing);
        if (j == 0) replaced_to_anchor = true;
      } else {
        any_blocked = true;
        bool pulled = false;
        if (j > 0 && grid.is_in_collision(nodes[j], opt.margin)) {
          const Vec3 moved = pull_node(nodes[j], nodes.back(), opt.spacing);
          pulled = (moved - nodes[j]).norm() > 1e-12;
          nodes[j] = moved;
        }
        // A blocked adjacent segment with no pull progress means the sweep
        // cannot improve below this node; skip to the next outer index.
        if (!pulled && !grid.line_of_sight(nodes[j], nodes[j + 1], opt.margin)) {
          break;
        }
      }
    }
    // The first outer pass straightened the entire path into a single
    // resampled segment; every remaining (i, j) pair lies on it and cannot
    // change anything.
    if (spans_whole_path && !any_blocked && replaced_to_anchor) break;
    --i;
  }
  const Vec3 end = nodes.back();
  path.nodes = dedupe_polyline(path.nodes, opt.dedupe_eps);
  path.nodes.back() = end;
}

TetherUpdateResult settle_tether(const TetherPath& path, const SdfGrid& grid,
                                 const TetherOptions& opt) {
  TetherUpdateResult res;
  res.path = path;
  res.path.spacing = opt.spacing;
  if (res.path.nodes.size() < 2) {
    return res;
  }
  double prev_len = compute_length(res.path);
  const double eps = opt.convergence_eps();
  res.converged = false;
  for (int sweep = 0; sweep < opt.max_sweeps; ++sweep) {
    tether_sweep(res.path, grid, opt);
    res.sweeps = sweep + 1;
    const double len = compute_length(res.path);
    bool nodes_free = true;
    for (const Vec3& p : res.path.nodes) {
      if (grid.is_in_collision(p, opt.margin)) {
        nodes_free = false;
        break;
      }
    }
    if (std::abs(prev_len - len) < eps && nodes_free) {
      res.converged = true;
      break;
    }
    prev_len = len;
  }
  return res;
}

TetherUpdateResult update_tether(const TetherPath& path, const Vec3& p_rov,
                                 const SdfGrid& grid,
                                 const TetherOptions& opt) {
  if (grid.is_in_collision(p_rov, opt.margin)) {
    TetherUpdateResult res;
    res.path = path;
    res.rov_rejected = true;
    res.converged = false;
    return res;
  }
  TetherPath appended = path;
  appended.spacing = opt.spacing;
  appended = append_rov(appended, p_rov);
  return settle_tether(appended, grid, opt);
}

}  // namespace tetherplan
