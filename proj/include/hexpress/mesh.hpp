#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace hexpress {

using Vec2 = Eigen::Vector2d;

/// One boundary edge of the tessellation: which element owns it, which of
/// the element's six local edges it is, and the unit outward normal.
struct BoundaryEdge {
  int element;
  int local_edge;  // edge k joins local nodes k and (k+1)%6
  Vec2 normal;
};

/// Regular honeycomb tessellation of an n_ex x n_ey block of hexagons.
///
/// Hexagons have vertical left/right edges; rows run horizontally and odd
/// rows are shifted half a cell in +x. Cell width is L_x / n_ex; the
/// requested L_y is only used to report back how close the meshed extent
/// comes (boundary cells are never clipped).
class HexMesh {
public:
  static HexMesh generate(int n_ex, int n_ey, double L_x, double L_y);

  const std::vector<Vec2>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 6>>& elements() const { return elements_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return boundary_edges_; }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_elements() const { return static_cast<int>(elements_.size()); }
  int n_ex() const { return n_ex_; }
  int n_ey() const { return n_ey_; }

  /// Extents actually covered by whole cells (may differ from the request in y).
  double extent_x() const { return extent_x_; }
  double extent_y() const { return extent_y_; }

  /// Horizontal pitch of a cell and hexagon edge length.
  double cell_width() const { return cell_width_; }
  double edge_length() const { return edge_length_; }

  /// Area of one hexagon (all cells are congruent).
  double element_area() const { return element_area_; }

  Vec2 element_centroid(int i) const;

  /// Six node coordinates of element i in local (counterclockwise) order.
  std::array<Vec2, 6> element_coords(int i) const;

  /// Grid position of element i.
  int element_row(int i) const { return i / n_ex_; }
  int element_col(int i) const { return i % n_ex_; }

  /// Node positions are mutable so boundary smoothing can feed deformed
  /// geometry back into assembly; connectivity is fixed.
  void set_nodes(std::vector<Vec2> nodes);

  /// True once set_nodes has been called; assembly then stops assuming all
  /// cells are congruent.
  bool deformed() const { return deformed_; }

private:
  bool deformed_ = false;
  std::vector<Vec2> nodes_;
  std::vector<std::array<int, 6>> elements_;
  std::vector<BoundaryEdge> boundary_edges_;
  int n_ex_ = 0, n_ey_ = 0;
  double extent_x_ = 0, extent_y_ = 0;
  double cell_width_ = 0, edge_length_ = 0, element_area_ = 0;
};

}  // namespace hexpress
