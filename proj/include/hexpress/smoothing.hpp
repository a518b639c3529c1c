#pragma once

#include <vector>

#include "hexpress/mesh.hpp"

namespace hexpress {

struct SmoothingConfig {
  int beta = 0;             // number of smoothing passes
  double threshold = 0.5;   // solid/void density cut
};

/// Closed loops of node indices tracing the solid/void (or solid/exterior)
/// interface of the thresholded density field. Empty when no solid exists.
std::vector<std::vector<int>> boundary_loops(const HexMesh& mesh,
                                             const std::vector<double>& rho,
                                             double threshold);

/// Midpoint-chord smoothing: each boundary node moves to the foot of the
/// perpendicular on the chord joining its two adjacent edge midpoints,
/// beta passes, midpoints updated incrementally. Nodes listed in `frozen`
/// are never moved, and a move that would invert an adjacent element is
/// rejected for that node. Returns the updated node positions.
std::vector<Vec2> smooth_boundary(const HexMesh& mesh,
                                  const std::vector<std::vector<int>>& loops, int beta,
                                  const std::vector<int>& frozen = {});

/// Sum of absolute exterior turning angles of one loop (total variation).
double turning_total_variation(const std::vector<Vec2>& nodes, const std::vector<int>& loop);

}  // namespace hexpress
