#pragma once

#include <array>

#include <Eigen/Core>

#include "hexpress/mesh.hpp"

namespace hexpress {

/// Wachspress rational barycentric basis on a convex hexagon.
///
/// For vertices v_0..v_5 and an evaluation point x,
///   w_l(x) = B_l * prod_{j != l-1, l} A_j(x),   N_l = w_l / sum_k w_k,
/// where A_j(x) is the signed area of triangle (v_j, v_{j+1}, x) and B_l the
/// area of (v_{l-1}, v_l, v_{l+1}). Gradients use the product rule directly,
/// so vertices and edges need no special casing.
namespace wachspress {

std::array<double, 6> shape_functions(const std::array<Vec2, 6>& verts, const Vec2& x);
std::array<Vec2, 6> shape_gradients(const std::array<Vec2, 6>& verts, const Vec2& x);

/// True if x lies inside or on the convex hexagon (counterclockwise verts).
bool contains(const std::array<Vec2, 6>& verts, const Vec2& x, double tol = 1e-12);

}  // namespace wachspress

struct QuadPoint {
  Vec2 point;
  double weight;
};

/// 18-point rule: the hexagon split into 6 centroid triangles, each with the
/// degree-2 midpoint rule. Exact for quadratics over the polygon.
std::array<QuadPoint, 18> hexagon_quadrature(const std::array<Vec2, 6>& verts);

double polygon_area(const std::array<Vec2, 6>& verts);

}  // namespace hexpress
