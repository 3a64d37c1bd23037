#pragma once

#include <utility>
#include <vector>

#include "tnav/tmap.hpp"

namespace tnav {

// 8-connected grid path. Cells marked non-traversable in the grid carry an
// infinite cost and are never entered.
struct GridPath {
  std::vector<std::pair<int, int>> cells;      // start..goal, 8-connected
  double total_cost = 0.0;                     // sum of edge costs
  std::vector<std::array<double, 2>> waypoints;  // world-frame cell centers
};

// Edge cost = step length (1 or sqrt(2) cell units) * (1 + beta * cost of the
// target cell); heuristic = Euclidean distance in cell units (admissible for
// cell costs >= 0). Ties break on smaller heuristic, then row-major index.
// Throws NoPathError when the goal is unreachable and SpecError on negative
// cell costs or out-of-grid endpoints.
GridPath astar_plan(const CostGrid& grid, std::pair<int, int> start, std::pair<int, int> goal,
                    double beta);

}  // namespace tnav
