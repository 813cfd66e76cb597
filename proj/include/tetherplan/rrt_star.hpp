#pragma once

#include <cstdint>
#include <vector>

#include "tetherplan/geometry.hpp"
#include "tetherplan/sdf_grid.hpp"

namespace tetherplan {

/// Configuration for one shortest-path query. Deterministic for a fixed
/// rng_seed.
struct PathQuery {
  Vec3 start{Vec3::Zero()};
  Vec3 goal{Vec3::Zero()};
  double margin = 0.1;
  Aabb bounds;                    // sampling region
  int max_iterations = 5000;
  double step = 0.25;             // extension length
  double goal_bias = 0.1;
  std::uint64_t rng_seed = 0;
  double resample_spacing = 0.0;  // 0 -> leave simplified vertices as-is
  // After the goal is first connected, keep refining for this many extra
  // iterations, then stop. 0 runs the full budget.
  int post_goal_iterations = 0;
};

enum class PlanStatus {
  kSuccess,
  kStartInCollision,
  kGoalInCollision,
  kNoPathWithinBudget,
};

struct PlannedPath {
  PlanStatus status = PlanStatus::kNoPathWithinBudget;
  std::vector<Vec3> points;
  double length = 0.0;      // after simplification
  double raw_length = 0.0;  // tree path before simplification
  int iterations_used = 0;

  bool ok() const { return status == PlanStatus::kSuccess; }
};

/// RRT* with greedy line-of-sight shortcutting of the extracted path.
/// Rewiring radius gamma * (log n / n)^(1/3), gamma = 2 * step.
PlannedPath plan_shortest_path(const PathQuery& query, const SdfGrid& grid);

double path_length(const std::vector<Vec3>& path);

}  // namespace tetherplan
