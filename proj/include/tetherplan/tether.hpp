#pragma once

#include <vector>

#include "tetherplan/geometry.hpp"
#include "tetherplan/sdf_grid.hpp"

namespace tetherplan {

/// Taut tether as an ordered polyline from the fixed anchor (node 0) to the
/// vehicle end. Values, not references: updates return a fresh path.
struct TetherPath {
  std::vector<Vec3> nodes;
  double spacing = 0.05;  // resampling resolution delta

  const Vec3& anchor() const { return nodes.front(); }
  const Vec3& end() const { return nodes.back(); }
  std::size_t size() const { return nodes.size(); }
};

struct TetherOptions {
  double spacing = 0.05;       // delta
  double margin = 0.05;        // tether clearance from occupied voxels
  double eps_conv = 0.0;       // 0 -> spacing / 10
  int max_sweeps = 50;
  double dedupe_eps = 1e-6;

  double convergence_eps() const {
    return eps_conv > 0.0 ? eps_conv : spacing / 10.0;
  }
};

struct TetherUpdateResult {
  TetherPath path;
  bool rov_rejected = false;  // p_rov violated the margin; prior path returned
  bool converged = true;      // false when the sweep budget ran out
  int sweeps = 0;
};

double compute_length(const TetherPath& path);

/// Appends p_rov as the new end node, resampling the connecting segment at
/// the path spacing. A duplicate of the current end (within dedupe_eps) is
/// suppressed.
TetherPath append_rov(const TetherPath& path, const Vec3& p_rov);

/// True iff nodes[j] and nodes[i] have collision-free line of sight.
/// Requires 0 <= j < i < size; throws std::out_of_range otherwise.
bool check_shortcut(const TetherPath& path, int i, int j, const SdfGrid& grid,
                    double margin);

/// Replaces the nodes strictly between j and i with samples of the straight
/// segment at the path spacing. Total length never increases.
TetherPath replace_nodes(const TetherPath& path, int i, int j, double delta);

/// Moves node toward endpoint by min(delta, remaining distance).
Vec3 pull_node(const Vec3& node, const Vec3& endpoint, double delta);

/// One full shortcut-and-pull sweep (outer index descending from the vehicle
/// end, inner descending below it). Mutates the path in place.
void tether_sweep(TetherPath& path, const SdfGrid& grid,
                  const TetherOptions& opt);

/// Relaxes an arbitrary polyline (anchor first) to a taut, collision-free
/// configuration by iterating sweeps until the length change drops below
/// eps_conv. Used both by update_tether and by recovery-path simulation.
TetherUpdateResult settle_tether(const TetherPath& path, const SdfGrid& grid,
                                 const TetherOptions& opt);

/// Full per-tick update: appends the vehicle position, then settles.
/// Rejects a p_rov that violates the margin (previous path returned with
/// rov_rejected set).
TetherUpdateResult update_tether(const TetherPath& path, const Vec3& p_rov,
                                 const SdfGrid& grid, const TetherOptions& opt);

}  // namespace tetherplan
