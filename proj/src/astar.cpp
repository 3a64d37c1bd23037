#include "tnav/astar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "tnav/error.hpp"

namespace tnav {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

struct Node {
  double f;
  double h;
  std::size_t idx;  // row-major tie-break
};

struct NodeCompare {
  bool operator()(const Node& a, const Node& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.idx > b.idx;
  }
};

}  // namespace

GridPath astar_plan(const CostGrid& grid, std::pair<int, int> start, std::pair<int, int> goal,
                    double beta) {
  if (!grid.in_grid(start.first, start.second) || !grid.in_grid(goal.first, goal.second)) {
    throw SpecError("astar_plan: start or goal outside grid");
  }
  if (beta < 0.0) throw SpecError("astar_plan: beta must be >= 0");
  for (const double c : grid.cost) {
    if (c < 0.0) throw SpecError("astar_plan: negative cell cost");
  }

  const int h = grid.height_cells;
  const int w = grid.width_cells;
  const std::size_t n = static_cast<std::size_t>(h) * w;
  const std::size_t start_idx = static_cast<std::size_t>(start.first) * w + start.second;
  const std::size_t goal_idx = static_cast<std::size_t>(goal.first) * w + goal.second;

  auto heuristic = [&](std::size_t idx) {
    const int m = static_cast<int>(idx) / w;
    const int c = static_cast<int>(idx) % w;
    const double dm = m - goal.first;
    const double dn = c - goal.second;
    return std::sqrt(dm * dm + dn * dn);
  };
  auto blocked = [&](std::size_t idx) { return !std::isfinite(grid.cost[idx]); };

  // The start cell's own cost is never billed (the vehicle is already
  // there), so a blocked start is plannable; a blocked goal is not.
  if (blocked(goal_idx)) {
    throw NoPathError("astar_plan: goal cell is non-traversable");
  }

  std::vector<double> g(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> parent(n, n);
  std::vector<std::uint8_t> closed(n, 0);
  std::priority_queue<Node, std::vector<Node>, NodeCompare> open;

  g[start_idx] = 0.0;
  open.push({heuristic(start_idx), heuristic(start_idx), start_idx});

  static constexpr int kDm[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
  static constexpr int kDn[8] = {-1, 0, 1, -1, 1, -1, 0, 1};

  while (!open.empty()) {
    const Node node = open.top();
    open.pop();
    if (closed[node.idx]) continue;
    closed[node.idx] = 1;
    if (node.idx == goal_idx) break;

    const int m = static_cast<int>(node.idx) / w;
    const int c = static_cast<int>(node.idx) % w;
    for (int k = 0; k < 8; ++k) {
      const int mm = m + kDm[k];
      const int nn = c + kDn[k];
      if (mm < 0 || mm >= h || nn < 0 || nn >= w) continue;
      const std::size_t nidx = static_cast<std::size_t>(mm) * w + nn;
      if (closed[nidx] || blocked(nidx)) continue;
      const double step = (kDm[k] != 0 && kDn[k] != 0) ? kSqrt2 : 1.0;
      const double edge = step * (1.0 + beta * grid.cost[nidx]);
      const double cand = g[node.idx] + edge;
      if (cand < g[nidx]) {
        g[nidx] = cand;
        parent[nidx] = node.idx;
        const double hh = heuristic(nidx);
        open.push({cand + hh, hh, nidx});
      }
    }
  }

  if (!closed[goal_idx]) {
    throw NoPathError("astar_plan: goal unreachable");
  }

  GridPath path;
  path.total_cost = g[goal_idx];
  std::vector<std::size_t> chain;
  for (std::size_t at = goal_idx; at != n; at = parent[at]) {
    chain.push_back(at);
    if (at == start_idx) break;
  }
  std::reverse(chain.begin(), chain.end());
  path.cells.reserve(chain.size());
  path.waypoints.reserve(chain.size());
  for (const std::size_t idx : chain) {
    const int m = static_cast<int>(idx) / w;
    const int c = static_cast<int>(idx) % w;
    path.cells.emplace_back(m, c);
    path.waypoints.push_back({grid.center_x(m), grid.center_y(c)});
  }
  return path;
}

}  // namespace tnav
