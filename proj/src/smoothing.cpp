#include "hexpress/smoothing.hpp"

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "hexpress/wachspress.hpp"

namespace hexpress {
namespace {

bool element_ok(const std::vector<Vec2>& pos, const std::array<int, 6>& elem) {
  std::array<Vec2, 6> v;
  for (int k = 0; k < 6; ++k) v[k] = pos[elem[k]];
  return polygon_area(v) > 0.0;
}

}  // namespace

std::vector<std::vector<int>> boundary_loops(const HexMesh& mesh,
                                             const std::vector<double>& rho,
                                             double threshold) {
  if (static_cast<int>(rho.size()) != mesh.num_elements())
    throw std::invalid_argument("boundary_loops: density size mismatch");

  // Undirected edge -> owning elements.
  std::map<std::pair<int, int>, std::pair<int, int>> owners;
  for (int i = 0; i < mesh.num_elements(); ++i)
    for (int k = 0; k < 6; ++k) {
      int n0 = mesh.elements()[i][k], n1 = mesh.elements()[i][(k + 1) % 6];
      auto key = std::minmax(n0, n1);
      auto [it, fresh] = owners.try_emplace({key.first, key.second}, std::make_pair(i, -1));
      if (!fresh) it->second.second = i;
    }

  auto solid = [&](int e) { return e >= 0 && rho[e] >= threshold; };

  // Directed boundary edges, solid region on the left (element CCW order).
  std::map<int, int> next;  // start node -> end node
  for (int i = 0; i < mesh.num_elements(); ++i) {
    if (!solid(i)) continue;
    for (int k = 0; k < 6; ++k) {
      int n0 = mesh.elements()[i][k], n1 = mesh.elements()[i][(k + 1) % 6];
      auto key = std::minmax(n0, n1);
      const auto& own = owners.at({key.first, key.second});
      const int other = own.first == i ? own.second : own.first;
      if (!solid(other)) next[n0] = n1;
    }
  }

  std::vector<std::vector<int>> loops;
  std::set<int> visited;
  for (const auto& [start, unused] : next) {
    if (visited.count(start)) continue;
    std::vector<int> loop;
    int node = start;
    do {
      loop.push_back(node);
      visited.insert(node);
      node = next.at(node);
    } while (node != start);
    loops.push_back(std::move(loop));
  }
  return loops;
}

std::vector<Vec2> smooth_boundary(const HexMesh& mesh,
                                  const std::vector<std::vector<int>>& loops, int beta,
                                  const std::vector<int>& frozen) {
  if (beta < 0) throw std::invalid_argument("smooth_boundary: beta must be >= 0");
  std::vector<Vec2> pos = mesh.nodes();
  if (beta == 0 || loops.empty()) return pos;

  std::vector<char> locked(pos.size(), 0);
  for (int n : frozen) locked.at(n) = 1;

  std::vector<std::vector<int>> elems_of_node(pos.size());
  for (int i = 0; i < mesh.num_elements(); ++i)
    for (int n : mesh.elements()[i]) elems_of_node[n].push_back(i);

  for (int pass = 0; pass < beta; ++pass) {
    for (const auto& loop : loops) {
      const int L = static_cast<int>(loop.size());
      if (L < 3) continue;
      for (int idx = 0; idx < L; ++idx) {
        const int node = loop[idx];
        if (locked[node]) continue;
        const Vec2 prev = pos[loop[(idx + L - 1) % L]];
        const Vec2 nextp = pos[loop[(idx + 1) % L]];
        const Vec2 p = pos[node];
        const Vec2 m1 = 0.5 * (prev + p), m2 = 0.5 * (p + nextp);
        const Vec2 chord = m2 - m1;
        const double len2 = chord.squaredNorm();
        if (len2 == 0.0) continue;
        const Vec2 cand = m1 + chord * (chord.dot(p - m1) / len2);

        pos[node] = cand;
        for (int e : elems_of_node[node]) {
          if (!element_ok(pos, mesh.elements()[e])) {
            pos[node] = p;  // would invert an element; keep the node put
            break;
          }
        }
      }
    }
  }
  return pos;
}

double turning_total_variation(const std::vector<Vec2>& nodes, const std::vector<int>& loop) {
  const int L = static_cast<int>(loop.size());
  double tv = 0.0;
  for (int i = 0; i < L; ++i) {
    const Vec2 e0 = nodes[loop[i]] - nodes[loop[(i + L - 1) % L]];
    const Vec2 e1 = nodes[loop[(i + 1) % L]] - nodes[loop[i]];
    const double cross = e0.x() * e1.y() - e0.y() * e1.x();
    const double dot = e0.dot(e1);
    tv += std::abs(std::atan2(cross, dot));
  }
  return tv;
}

}  // namespace hexpress
