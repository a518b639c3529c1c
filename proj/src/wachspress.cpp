#include "hexpress/wachspress.hpp"

#include <cmath>
#include <stdexcept>

namespace hexpress {
namespace wachspress {
namespace {

inline double tri_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x()));
}

// Signed areas A_j(x) of (v_j, v_{j+1}, x) and their (constant) gradients.
struct EdgeAreas {
  std::array<double, 6> A;
  std::array<Vec2, 6> dA;
};

EdgeAreas edge_areas(const std::array<Vec2, 6>& v, const Vec2& x) {
  EdgeAreas e;
  for (int j = 0; j < 6; ++j) {
    const Vec2& p = v[j];
    const Vec2& q = v[(j + 1) % 6];
    e.A[j] = tri_area(p, q, x);
    e.dA[j] = 0.5 * Vec2(p.y() - q.y(), q.x() - p.x());
  }
  return e;
}

std::array<double, 6> raw_weights(const std::array<Vec2, 6>& v, const std::array<double, 6>& A) {
  std::array<double, 6> w;
  for (int l = 0; l < 6; ++l) {
    const double B = tri_area(v[(l + 5) % 6], v[l], v[(l + 1) % 6]);
    double prod = B;
    for (int j = 0; j < 6; ++j)
      if (j != l && j != (l + 5) % 6) prod *= A[j];
    w[l] = prod;
  }
  return w;
}

}  // namespace

bool contains(const std::array<Vec2, 6>& v, const Vec2& x, double tol) {
  const double scale = polygon_area(v);
  for (int j = 0; j < 6; ++j)
    if (tri_area(v[j], v[(j + 1) % 6], x) < -tol * scale) return false;
  return true;
}

std::array<double, 6> shape_functions(const std::array<Vec2, 6>& v, const Vec2& x) {
  if (!contains(v, x))
    throw std::domain_error("wachspress::shape_functions: point outside hexagon");
  const EdgeAreas e = edge_areas(v, x);
  std::array<double, 6> w = raw_weights(v, e.A);
  double sum = 0.0;
  for (double wl : w) sum += wl;
  for (double& wl : w) wl /= sum;
  return w;
}

std::array<Vec2, 6> shape_gradients(const std::array<Vec2, 6>& v, const Vec2& x) {
  if (!contains(v, x))
    throw std::domain_error("wachspress::shape_gradients: point outside hexagon");
  const EdgeAreas e = edge_areas(v, x);
  const std::array<double, 6> w = raw_weights(v, e.A);

  std::array<Vec2, 6> dw;
  for (int l = 0; l < 6; ++l) {
    const double B = tri_area(v[(l + 5) % 6], v[l], v[(l + 1) % 6]);
    Vec2 g = Vec2::Zero();
    for (int k = 0; k < 6; ++k) {
      if (k == l || k == (l + 5) % 6) continue;
      double prod = B;
      for (int j = 0; j < 6; ++j)
        if (j != l && j != (l + 5) % 6 && j != k) prod *= e.A[j];
      g += prod * e.dA[k];
    }
    dw[l] = g;
  }

  double W = 0.0;
  Vec2 dW = Vec2::Zero();
  for (int l = 0; l < 6; ++l) {
    W += w[l];
    dW += dw[l];
  }
  std::array<Vec2, 6> grads;
  for (int l = 0; l < 6; ++l) grads[l] = (dw[l] - (w[l] / W) * dW) / W;
  return grads;
}

}  // namespace wachspress

double polygon_area(const std::array<Vec2, 6>& v) {
  double s = 0.0;
  for (int j = 0; j < 6; ++j) {
    const Vec2& p = v[j];
    const Vec2& q = v[(j + 1) % 6];
    s += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * s;
}

std::array<QuadPoint, 18> hexagon_quadrature(const std::array<Vec2, 6>& v) {
  Vec2 c = Vec2::Zero();
  for (const Vec2& p : v) c += p;
  c /= 6.0;

  // Degree-2 midpoint rule on each centroid triangle.
  std::array<QuadPoint, 18> q;
  int n = 0;
  for (int j = 0; j < 6; ++j) {
    const Vec2& p0 = v[j];
    const Vec2& p1 = v[(j + 1) % 6];
    const double A = wachspress::tri_area(p0, p1, c);
    const Vec2 m01 = 0.5 * (p0 + p1), m1c = 0.5 * (p1 + c), mc0 = 0.5 * (c + p0);
    q[n++] = {m01, A / 3.0};
    q[n++] = {m1c, A / 3.0};
    q[n++] = {mc0, A / 3.0};
  }
  return q;
}

}  // namespace hexpress
