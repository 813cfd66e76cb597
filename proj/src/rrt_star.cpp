#include "tetherplan/rrt_star.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace tetherplan {

double path_length(const std::vector<Vec3>& path) {
  return polyline_length(path);
}

namespace {

struct TreeNode {
  Vec3 pos;
  int parent;
};

// Cost recomputed through the parent chain so rewires stay consistent.
double node_cost(const std::vector<TreeNode>& nodes, int idx) {
  double c = 0.0;
  while (nodes[idx].parent >= 0) {
    c += (nodes[idx].pos - nodes[nodes[idx].parent].pos).norm();
    idx = nodes[idx].parent;
  }
  return c;
}

std::vector<Vec3> simplify_greedy(const std::vector<Vec3>& raw,
                                  const SdfGrid& grid, double margin) {
  if (raw.size() <= 2) return raw;
  std::vector<Vec3> out;
  out.push_back(raw.front());
  std::size_t k = 0;
  while (k + 1 < raw.size()) {
    std::size_t best = k + 1;
    for (std::size_t m = raw.size() - 1; m > k + 1; --m) {
      if (grid.line_of_sight(raw[k], raw[m], margin)) {
        best = m;
        break;
      }
    }
    out.push_back(raw[best]);
    k = best;
  }
  return out;
}

}  // namespace

PlannedPath plan_shortest_path(const PathQuery& query, const SdfGrid& grid) {
  PlannedPath result;
  if (grid.is_in_collision(query.start, query.margin)) {
    result.status = PlanStatus::kStartInCollision;
    return result;
  }
  if (grid.is_in_collision(query.goal, query.margin)) {
    result.status = PlanStatus::kGoalInCollision;
    return result;
  }

  const auto finish = [&](std::vector<Vec3> pts, double raw_len) {
    pts = dedupe_polyline(pts);
    result.raw_length = raw_len;
    std::vector<Vec3> simplified = simplify_greedy(pts, grid, query.margin);
    if (query.resample_spacing > 0.0) {
      simplified = resample_polyline(simplified, query.resample_spacing);
    }
    result.points = std::move(simplified);
    result.length = polyline_length(result.points);
    result.status = PlanStatus::kSuccess;
  };

  if ((query.goal - query.start).norm() < 1e-9) {
    result.points = {query.start};
    result.status = PlanStatus::kSuccess;
    return result;
  }
  if (grid.line_of_sight(query.start, query.goal, query.margin)) {
    finish({query.start, query.goal}, (query.goal - query.start).norm());
    return result;
  }

  std::mt19937_64 rng(query.rng_seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const Vec3 lo = query.bounds.min;
  const Vec3 ext = query.bounds.extent();

  std::vector<TreeNode> nodes;
  nodes.reserve(1024);
  nodes.push_back({query.start, -1});

  const double gamma = 2.0 * query.step;
  int best_goal_parent = -1;
  double best_goal_cost = std::numeric_limits<double>::infinity();
  int goal_found_iter = -1;

  for (int it = 1; it <= query.max_iterations; ++it) {
    result.iterations_used = it;
    if (best_goal_parent >= 0 && query.post_goal_iterations > 0 &&
        it - goal_found_iter > query.post_goal_iterations) {
      break;
    }

    Vec3 sample;
    if (u01(rng) < query.goal_bias) {
      sample = query.goal;
    } else {
      sample = Vec3(lo.x() + ext.x() * u01(rng), lo.y() + ext.y() * u01(rng),
                    lo.z() + ext.z() * u01(rng));
    }

    int nearest = 0;
    double nearest_d2 = std::numeric_limits<double>::infinity();
    for (int k = 0; k < static_cast<int>(nodes.size()); ++k) {
      const double d2 = (nodes[k].pos - sample).squaredNorm();
      if (d2 < nearest_d2) {
        nearest_d2 = d2;
        nearest = k;
      }
    }
    const Vec3& from = nodes[nearest].pos;
    Vec3 dir = sample - from;
    const double dist = dir.norm();
    if (dist < 1e-12) continue;
    const Vec3 newp = from + dir * (std::min(query.step, dist) / dist);
    if (!grid.line_of_sight(from, newp, query.margin)) continue;

    const double n = static_cast<double>(nodes.size());
    const double radius = gamma * std::cbrt(std::log(n + 1.0) / (n + 1.0));

    std::vector<int> neighbors;
    for (int k = 0; k < static_cast<int>(nodes.size()); ++k) {
      if ((nodes[k].pos - newp).norm() <= radius) neighbors.push_back(k);
    }
    if (neighbors.empty()) neighbors.push_back(nearest);

    int best_parent = nearest;
    double best_cost = node_cost(nodes, nearest) + (newp - from).norm();
    for (int k : neighbors) {
      if (k == nearest) continue;
      const double c = node_cost(nodes, k) + (newp - nodes[k].pos).norm();
      if (c < best_cost && grid.line_of_sight(nodes[k].pos, newp, query.margin)) {
        best_cost = c;
        best_parent = k;
      }
    }
    const int new_idx = static_cast<int>(nodes.size());
    nodes.push_back({newp, best_parent});

    for (int k : neighbors) {
      if (k == best_parent) continue;
      const double through = best_cost + (nodes[k].pos - newp).norm();
      if (through + 1e-12 < node_cost(nodes, k) &&
          grid.line_of_sight(newp, nodes[k].pos, query.margin)) {
        nodes[k].parent = new_idx;
      }
    }

    const double goal_gap = (query.goal - newp).norm();
    if (goal_gap <= query.step &&
        grid.line_of_sight(newp, query.goal, query.margin)) {
      const double total = best_cost + goal_gap;
      if (total < best_goal_cost) {
        best_goal_cost = total;
        best_goal_parent = new_idx;
        if (goal_found_iter < 0) goal_found_iter = it;
      }
    }
  }

  if (best_goal_parent < 0) {
    result.status = PlanStatus::kNoPathWithinBudget;
    return result;
  }

  std::vector<Vec3> raw;
  raw.push_back(query.goal);
  for (int k = best_goal_parent; k >= 0; k = nodes[k].parent) {
    raw.push_back(nodes[k].pos);
  }
  std::reverse(raw.begin(), raw.end());
  finish(std::move(raw), node_cost(nodes, best_goal_parent) +
                             (query.goal - nodes[best_goal_parent].pos).norm());
  return result;
}

}  // namespace tetherplan
