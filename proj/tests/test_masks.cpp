#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hexpress/masks.hpp"

using namespace hexpress;

namespace {

/// Scalar oracle: density of one element from first principles.
double rho_oracle(const std::vector<Mask>& masks, const Vec2& c) {
  double rho = 1.0;
  for (const Mask& m : masks) {
    const double X = std::cos(m.theta) * (c.x() - m.x) + std::sin(m.theta) * (c.y() - m.y);
    const double Y = -std::sin(m.theta) * (c.x() - m.x) + std::cos(m.theta) * (c.y() - m.y);
    const double d = (X / m.a) * (X / m.a) + (Y / m.b) * (Y / m.b) - 1.0;
    rho *= std::pow(1.0 / (1.0 + std::exp(-m.alpha * d)), m.gamma);
  }
  return rho;
}

double& mask_var(Mask& m, int v) {
  switch (v) {
    case 0: return m.x;
    case 1: return m.y;
    case 2: return m.a;
    case 3: return m.b;
    case 4: return m.theta;
    case 5: return m.alpha;
    default: return m.gamma;
  }
}

}  // namespace

TEST_CASE("signed measure against hand-worked points") {
  Mask m;
  m.x = 1.0;
  m.y = 2.0;
  m.a = 0.5;
  m.b = 0.25;
  m.theta = 0.0;
  CHECK(signed_measure(m, Vec2(1.0, 2.0)) == doctest::Approx(-1.0));   // center
  CHECK(signed_measure(m, Vec2(1.5, 2.0)) == doctest::Approx(0.0));    // on the boundary
  CHECK(signed_measure(m, Vec2(1.0, 2.5)) == doctest::Approx(3.0));    // two minor axes out
  // Rotation by pi/2 swaps the axes.
  m.theta = M_PI / 2.0;
  CHECK(signed_measure(m, Vec2(1.25, 2.0)) == doctest::Approx(0.0));
}

TEST_CASE("logistic factor: midpoint and saturation") {
  CHECK(logistic_density(5.0, 0.0) == doctest::Approx(0.5));
  CHECK(logistic_density(10.0, 100.0) == doctest::Approx(1.0));
  CHECK(logistic_density(10.0, -100.0) == doctest::Approx(0.0));
  CHECK(logistic_density(2.0, 1.0) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))));
  // Huge exponents must not overflow.
  CHECK(std::isfinite(logistic_density(1e6, -1e6)));
  CHECK(std::isfinite(logistic_density(1e6, 1e6)));
}

TEST_CASE("seeded grid: counts, circles, bounds") {
  const MaskSet ms = MaskSet::seed_grid(4, 3, 0.4, 0.3, 0.05, 0.001, 1.0, 30.0, 20.0);
  REQUIRE(ms.masks.size() == 12);
  for (const Mask& m : ms.masks) {
    CHECK(m.a == doctest::Approx(0.025));
    CHECK(m.b == doctest::Approx(0.025));
    CHECK(m.theta == 0.0);
    CHECK(m.alpha == 1.0);
    CHECK(m.gamma == 1.0);
    CHECK(m.x >= 0.0);
    CHECK(m.x <= 0.4);
    CHECK(m.y >= 0.0);
    CHECK(m.y <= 0.3);
  }
  // Centers are distinct and fill the grid.
  for (size_t i = 0; i + 1 < ms.masks.size(); ++i)
    CHECK((std::abs(ms.masks[i].x - ms.masks[i + 1].x) > 1e-12 ||
           std::abs(ms.masks[i].y - ms.masks[i + 1].y) > 1e-12));
  // Bounds respect the requested limits.
  CHECK(ms.bounds.upper[5] == doctest::Approx(30.0));
  CHECK(ms.bounds.upper[6] == doctest::Approx(20.0));
  for (int v = 0; v < kMaskVars; ++v) CHECK(ms.bounds.lower[v] < ms.bounds.upper[v]);
}

TEST_CASE("clip_to_bounds projects every variable") {
  MaskSet ms = MaskSet::seed_grid(1, 1, 1.0, 1.0, 0.1);
  ms.masks[0].a = 1e9;
  ms.masks[0].alpha = -5.0;
  ms.clip_to_bounds();
  CHECK(ms.masks[0].a == doctest::Approx(ms.bounds.upper[2]));
  CHECK(ms.masks[0].alpha == doctest::Approx(ms.bounds.lower[5]));
}

TEST_CASE("density field matches the scalar oracle") {
  const HexMesh mesh = HexMesh::generate(6, 4, 0.6, 0.4);
  MaskSet ms = MaskSet::seed_grid(3, 2, 0.6, 0.4, 0.15);
  ms.masks[0].theta = 0.4;
  ms.masks[1].alpha = 12.0;
  ms.masks[2].gamma = 3.0;
  ms.masks[3].a = 0.21;
  ms.masks[4].b = 0.04;

  const auto rho = density_field(ms, mesh);
  REQUIRE(static_cast<int>(rho.size()) == mesh.num_elements());
  for (int i = 0; i < mesh.num_elements(); ++i) {
    CHECK(rho[i] == doctest::Approx(rho_oracle(ms.masks, mesh.element_centroid(i)))
                        .epsilon(1e-12));
    CHECK(rho[i] >= 0.0);
    CHECK(rho[i] <= 1.0);
  }
}

TEST_CASE("mask order does not change the density") {
  const HexMesh mesh = HexMesh::generate(5, 5, 1.0, 1.0);
  MaskSet ms = MaskSet::seed_grid(2, 2, 1.0, 1.0, 0.4);
  ms.masks[1].alpha = 7.0;
  ms.masks[2].gamma = 2.5;
  MaskSet shuffled = ms;
  std::reverse(shuffled.masks.begin(), shuffled.masks.end());
  const auto r1 = density_field(ms, mesh);
  const auto r2 = density_field(shuffled, mesh);
  for (size_t i = 0; i < r1.size(); ++i) CHECK(r1[i] == doctest::Approx(r2[i]).epsilon(1e-13));
}

TEST_CASE("raising gamma erodes material near a mask") {
  const HexMesh mesh = HexMesh::generate(5, 5, 1.0, 1.0);
  MaskSet ms = MaskSet::seed_grid(1, 1, 1.0, 1.0, 0.5);
  ms.masks[0].alpha = 5.0;
  const auto lo = density_field(ms, mesh);
  ms.masks[0].gamma = 4.0;
  const auto hi = density_field(ms, mesh);
  for (size_t i = 0; i < lo.size(); ++i) CHECK(hi[i] <= lo[i] + 1e-14);
}

TEST_CASE("circular masks are rotation invariant") {
  const HexMesh mesh = HexMesh::generate(4, 4, 1.0, 1.0);
  MaskSet ms = MaskSet::seed_grid(1, 1, 1.0, 1.0, 0.6);
  const auto before = density_field(ms, mesh);
  ms.masks[0].theta = 1.234;
  const auto after = density_field(ms, mesh);
  for (size_t i = 0; i < before.size(); ++i)
    CHECK(after[i] == doctest::Approx(before[i]).epsilon(1e-13));

  // And the theta partial is identically zero.
  const auto field = density_with_jacobian(ms, mesh, 0.0);
  for (const auto& row : field.jac)
    for (const auto& e : row) CHECK(std::abs(e.d[4]) <= 1e-12);
}

TEST_CASE("jacobian matches central finite differences over random configurations") {
  const HexMesh mesh = HexMesh::generate(6, 5, 0.3, 0.25);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> ux(0.02, 0.28), uy(0.02, 0.23), uab(0.02, 0.12),
      uth(-1.5, 1.5), ual(0.5, 20.0), uga(0.5, 5.0);

  for (int trial = 0; trial < 50; ++trial) {
    MaskSet ms = MaskSet::seed_grid(2, 1, 0.3, 0.25, 0.1, 0.001, 1.0, 30.0, 30.0);
    for (Mask& m : ms.masks) {
      m.x = ux(rng);
      m.y = uy(rng);
      m.a = uab(rng);
      m.b = uab(rng);
      m.theta = uth(rng);
      m.alpha = ual(rng);
      m.gamma = uga(rng);
    }

    const DensityField field = density_with_jacobian(ms, mesh, 0.0);
    const std::array<double, kMaskVars> h = {1e-7, 1e-7, 1e-7, 1e-7, 1e-6, 1e-6, 1e-6};

    for (int i = 0; i < mesh.num_elements(); i += 7) {
      for (const auto& e : field.jac[i]) {
        for (int v = 0; v < kMaskVars; ++v) {
          MaskSet plus = ms, minus = ms;
          mask_var(plus.masks[e.mask], v) += h[v];
          mask_var(minus.masks[e.mask], v) -= h[v];
          const double fd = (rho_oracle(plus.masks, mesh.element_centroid(i)) -
                             rho_oracle(minus.masks, mesh.element_centroid(i))) /
                            (2 * h[v]);
          const double denom = std::max(std::abs(fd), 1e-3);
          CHECK(std::abs(e.d[v] - fd) / denom <= 1e-5);
        }
      }
    }
  }
}

TEST_CASE("jacobian pruning drops only negligible entries") {
  const HexMesh mesh = HexMesh::generate(6, 4, 0.6, 0.4);
  MaskSet ms = MaskSet::seed_grid(2, 2, 0.6, 0.4, 0.1);
  ms.masks[0].alpha = 25.0;  // sharp mask: far elements are insensitive
  const DensityField full = density_with_jacobian(ms, mesh, 0.0);
  const DensityField pruned = density_with_jacobian(ms, mesh, 1e-14);
  size_t nfull = 0, npruned = 0;
  for (const auto& r : full.jac) nfull += r.size();
  for (const auto& r : pruned.jac) npruned += r.size();
  CHECK(npruned <= nfull);
  for (size_t i = 0; i < full.rho.size(); ++i)
    CHECK(full.rho[i] == doctest::Approx(pruned.rho[i]).epsilon(1e-14));
}

TEST_CASE("mask table round-trips exactly") {
  MaskSet ms = MaskSet::seed_grid(3, 2, 0.4, 0.3, 0.07);
  ms.masks[2].theta = -0.7853981633974483;
  ms.masks[4].alpha = 17.25;
  ms.masks[5].gamma = 3.0000000001;
  const std::string text = masks_to_table(ms);
  const auto back = masks_from_table(text);
  REQUIRE(back.size() == ms.masks.size());
  for (size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].x == ms.masks[i].x);
    CHECK(back[i].y == ms.masks[i].y);
    CHECK(back[i].a == ms.masks[i].a);
    CHECK(back[i].b == ms.masks[i].b);
    CHECK(back[i].theta == ms.masks[i].theta);
    CHECK(back[i].alpha == ms.masks[i].alpha);
    CHECK(back[i].gamma == ms.masks[i].gamma);
  }
  CHECK_THROWS(masks_from_table("1 2 3\n"));
}
