#include "hexpress/mesh.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace hexpress {

HexMesh HexMesh::generate(int n_ex, int n_ey, double L_x, double L_y) {
  if (n_ex < 1 || n_ey < 1)
    throw std::invalid_argument("HexMesh::generate: element counts must be >= 1");
  if (!(L_x > 0.0) || !(L_y > 0.0))
    throw std::invalid_argument("HexMesh::generate: domain extents must be > 0");

  HexMesh m;
  m.n_ex_ = n_ex;
  m.n_ey_ = n_ey;

  const double w = L_x / n_ex;           // horizontal pitch
  const double a = w / std::sqrt(3.0);   // hexagon edge length
  m.cell_width_ = w;
  m.edge_length_ = a;
  m.element_area_ = 1.5 * std::sqrt(3.0) * a * a;

  // Local corner offsets, counterclockwise from the bottom apex.
  const Vec2 corner[6] = {
      {0.0, -a}, {0.5 * w, -0.5 * a}, {0.5 * w, 0.5 * a},
      {0.0, a},  {-0.5 * w, 0.5 * a}, {-0.5 * w, -0.5 * a}};

  // All corner coordinates sit on the half-pitch lattice (w/2, a/2), so node
  // deduplication reduces to integer keys.
  std::map<std::pair<long, long>, int> node_of;
  auto node_index = [&](const Vec2& p) {
    const long kx = std::lround(2.0 * p.x() / w);
    const long ky = std::lround(2.0 * p.y() / a);
    auto it = node_of.find({kx, ky});
    if (it != node_of.end()) return it->second;
    const int id = static_cast<int>(m.nodes_.size());
    node_of.emplace(std::make_pair(kx, ky), id);
    // Snap to the lattice so shared nodes are bit-identical between elements.
    m.nodes_.push_back(Vec2(0.5 * kx * w, 0.5 * ky * a));
    return id;
  };

  m.elements_.reserve(static_cast<size_t>(n_ex) * n_ey);
  for (int r = 0; r < n_ey; ++r) {
    for (int c = 0; c < n_ex; ++c) {
      const Vec2 center(w * (c + 0.5 + (r % 2 ? 0.5 : 0.0)), a * (1.0 + 1.5 * r));
      std::array<int, 6> elem;
      for (int k = 0; k < 6; ++k) elem[k] = node_index(center + corner[k]);
      m.elements_.push_back(elem);
    }
  }

  m.extent_x_ = w * (n_ex + (n_ey > 1 ? 0.5 : 0.0));
  m.extent_y_ = a * (1.5 * n_ey + 0.5);
  (void)L_y;  // requested L_y is advisory; whole cells are kept

  // Edges referenced by a single element form the domain perimeter.
  std::map<std::pair<int, int>, std::pair<int, int>> edge_owner;  // node pair -> (elem, local)
  for (int i = 0; i < m.num_elements(); ++i) {
    for (int k = 0; k < 6; ++k) {
      int n0 = m.elements_[i][k], n1 = m.elements_[i][(k + 1) % 6];
      auto key = std::minmax(n0, n1);
      auto it = edge_owner.find({key.first, key.second});
      if (it == edge_owner.end())
        edge_owner[{key.first, key.second}] = {i, k};
      else
        it->second.first = -1;  // interior
    }
  }
  for (const auto& [key, owner] : edge_owner) {
    if (owner.first < 0) continue;
    const auto& elem = m.elements_[owner.first];
    const Vec2 d = m.nodes_[elem[(owner.second + 1) % 6]] - m.nodes_[elem[owner.second]];
    m.boundary_edges_.push_back({owner.first, owner.second, Vec2(d.y(), -d.x()).normalized()});
  }

  return m;
}

Vec2 HexMesh::element_centroid(int i) const {
  if (i < 0 || i >= num_elements())
    throw std::out_of_range("HexMesh::element_centroid: element index out of range");
  Vec2 c = Vec2::Zero();
  for (int n : elements_[i]) c += nodes_[n];
  return c / 6.0;
}

std::array<Vec2, 6> HexMesh::element_coords(int i) const {
  if (i < 0 || i >= num_elements())
    throw std::out_of_range("HexMesh::element_coords: element index out of range");
  std::array<Vec2, 6> xs;
  for (int k = 0; k < 6; ++k) xs[k] = nodes_[elements_[i][k]];
  return xs;
}

void HexMesh::set_nodes(std::vector<Vec2> nodes) {
  if (nodes.size() != nodes_.size())
    throw std::invalid_argument("HexMesh::set_nodes: node count must not change");
  nodes_ = std::move(nodes);
  deformed_ = true;
}

}  // namespace hexpress
