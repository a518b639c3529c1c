#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hexpress/pipeline.hpp"
#include "hexpress/problem.hpp"

using namespace hexpress;

namespace {

ProblemSpec cantilever(ObjectiveKind kind) {
  ProblemSpec ps;
  ps.name = "cantilever";
  ps.n_ex = 8;
  ps.n_ey = 6;
  ps.L_x = 0.08;
  ps.L_y = 0.06;
  ps.fixes.push_back({{Side::Left, 0.0, 1.0}, true, true});
  ps.pressure_edges.push_back({Side::Bottom, 0.0, 1.0});
  ps.zero_pressure_edges.push_back({Side::Top, 0.0, 1.0});
  ps.objective = kind;
  if (kind == ObjectiveKind::Multicriteria) {
    ps.chi = 1.0;
    ps.output = OutputSpring{1.0, 0.5, 0.0, -1.0, 1e3};
  }
  return ps;
}

std::vector<double> mid_gray_density(const ResolvedProblem& rp) {
  // Two soft masks give a smoothly varying, strictly interior density field.
  MaskSet ms = MaskSet::seed_grid(2, 1, rp.mesh.extent_x(), rp.mesh.extent_y(),
                                  0.6 * rp.mesh.extent_y());
  ms.masks[0].alpha = 4.0;
  ms.masks[1].alpha = 6.0;
  ms.masks[1].gamma = 2.0;
  return density_field(ms, rp.mesh);
}

double objective_at(const ResolvedProblem& rp, const std::vector<double>& rho) {
  return objective_value(rp.objective_spec(), evaluate_forward(rp, rho));
}

}  // namespace

TEST_CASE("objective values from a hand-built state") {
  ForwardState st;
  SparseMat K(2, 2);
  K.insert(0, 0) = 3.0;
  K.insert(1, 1) = 5.0;
  K.makeCompressed();
  st.K = K;
  st.u = Eigen::VectorXd(2);
  st.u << 1.0, 2.0;
  st.v = Eigen::VectorXd(2);
  st.v << -1.0, 0.5;

  ObjectiveSpec obj;
  obj.kind = ObjectiveKind::Compliance;
  // 2 u^T K u = 2 (3 + 20)
  CHECK(objective_value(obj, st) == doctest::Approx(46.0));

  obj.kind = ObjectiveKind::Multicriteria;
  obj.chi = 2.5;
  // MSE = v^T K u = -3 + 5; SE = u^T K u = 23
  CHECK(objective_value(obj, st) == doctest::Approx(-2.5 * 2.0 / 23.0));
}

TEST_CASE("grayscale indicator endpoints") {
  CHECK(grayscale_indicator({0.5, 0.5, 0.5}) == 1.0);
  CHECK(grayscale_indicator({0.0, 1.0, 1.0, 0.0}) == 0.0);
  CHECK(grayscale_indicator({0.25}) == doctest::Approx(0.75));
}

TEST_CASE("volume fraction is the area-weighted mean density") {
  const HexMesh m = HexMesh::generate(3, 3, 0.3, 0.3);
  std::vector<double> rho(m.num_elements());
  double mean = 0;
  for (size_t i = 0; i < rho.size(); ++i) {
    rho[i] = 0.1 + 0.05 * i;
    mean += rho[i];
  }
  mean /= rho.size();
  // All cells share one area, so the weighted mean equals the plain mean.
  CHECK(volume_fraction(m, rho) == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("constraint values and their sensitivities") {
  const HexMesh m = HexMesh::generate(4, 3, 0.4, 0.3);
  std::vector<double> rho(m.num_elements());
  for (size_t i = 0; i < rho.size(); ++i) rho[i] = 0.05 + 0.07 * (i % 13);
  ConstraintSpec cs;
  cs.V_star = 0.3;
  cs.delta = 0.005;

  const auto [g1, g2] = constraint_values(m, rho, cs);
  CHECK(g1 == doctest::Approx(volume_fraction(m, rho) / cs.V_star - 1.0).epsilon(1e-13));
  CHECK(g2 == doctest::Approx(grayscale_indicator(rho) - cs.delta).epsilon(1e-13));

  const auto dv = volume_sensitivity(m, cs);
  const auto dg = grayscale_sensitivity(rho);
  const double h = 1e-8;
  for (size_t i = 0; i < rho.size(); i += 3) {
    auto rp = rho, rm = rho;
    rp[i] += h;
    rm[i] -= h;
    const auto [g1p, g2p] = constraint_values(m, rp, cs);
    const auto [g1m, g2m] = constraint_values(m, rm, cs);
    CHECK(dv[i] == doctest::Approx((g1p - g1m) / (2 * h)).epsilon(1e-5));
    CHECK(dg[i] == doctest::Approx((g2p - g2m) / (2 * h)).epsilon(1e-5));
  }
}

TEST_CASE("density-level objective gradients match finite differences") {
  for (ObjectiveKind kind : {ObjectiveKind::Compliance, ObjectiveKind::Multicriteria}) {
    CAPTURE(static_cast<int>(kind));
    const ResolvedProblem rp = resolve(cantilever(kind));
    const std::vector<double> rho = mid_gray_density(rp);

    const ForwardState st = evaluate_forward(rp, rho);
    const auto sens = objective_sensitivity(rp.objective_spec(), st);
    REQUIRE(sens.size() == rho.size());

    double gmax = 0;
    for (double s : sens) gmax = std::max(gmax, std::abs(s));
    REQUIRE(gmax > 0);

    const double h = 1e-6;
    for (size_t i = 0; i < rho.size(); i += 5) {
      auto rp_rho = rho, rm_rho = rho;
      rp_rho[i] += h;
      rm_rho[i] -= h;
      const double fd = (objective_at(rp, rp_rho) - objective_at(rp, rm_rho)) / (2 * h);
      // Relative to the component when it matters, to the gradient scale when
      // the component is dominated by linear-solver noise.
      CHECK(std::abs(sens[i] - fd) / std::max(std::abs(fd), 1e-2 * gmax) <= 1e-4);
    }
  }
}

TEST_CASE("dropping the load term breaks the gradients") {
  const ResolvedProblem rp = resolve(cantilever(ObjectiveKind::Compliance));
  const std::vector<double> rho = mid_gray_density(rp);
  const ForwardState st = evaluate_forward(rp, rho);
  const auto partial = objective_sensitivity(rp.objective_spec(), st, false);

  double gmax = 0;
  for (double s : partial) gmax = std::max(gmax, std::abs(s));

  const double h = 1e-6;
  double worst = 0;
  for (size_t i = 0; i < rho.size(); i += 3) {
    auto rp_rho = rho, rm_rho = rho;
    rp_rho[i] += h;
    rm_rho[i] -= h;
    const double fd = (objective_at(rp, rp_rho) - objective_at(rp, rm_rho)) / (2 * h);
    worst = std::max(worst,
                     std::abs(partial[i] - fd) / std::max(std::abs(fd), 1e-3 * gmax));
  }
  CHECK(worst > 1e-2);
}

TEST_CASE("chain rule accumulates the sparse jacobian") {
  DensityField field;
  field.rho = {0.4, 0.9};
  field.jac.resize(2);
  DensityField::Entry e0{0, {1, 2, 3, 4, 5, 6, 7}};
  DensityField::Entry e1{1, {-1, 0, 0, 0, 0, 0, 2}};
  field.jac[0] = {e0, e1};
  field.jac[1] = {e1};

  const Eigen::VectorXd g = chain_to_masks({2.0, 3.0}, field, 2);
  REQUIRE(g.size() == 14);
  CHECK(g[0] == doctest::Approx(2.0));    // mask 0, x: 2*1
  CHECK(g[6] == doctest::Approx(14.0));   // mask 0, gamma: 2*7
  CHECK(g[7] == doctest::Approx(-5.0));   // mask 1, x: 2*(-1) + 3*(-1)
  CHECK(g[13] == doctest::Approx(10.0));  // mask 1, gamma: 2*2 + 3*2
  CHECK(g[8] == 0.0);
}

TEST_CASE("full mask-level gradients on the cantilever") {
  for (ObjectiveKind kind : {ObjectiveKind::Compliance, ObjectiveKind::Multicriteria}) {
    CAPTURE(static_cast<int>(kind));
    ProblemSpec ps = cantilever(kind);
    ps.opt.n_mx = 2;
    ps.opt.n_my = 1;
    const ResolvedProblem rp = resolve(ps);
    MaskSet ms = MaskSet::seed_grid(2, 1, rp.mesh.extent_x(), rp.mesh.extent_y(),
                                    0.6 * rp.mesh.extent_y());
    ms.masks[0].alpha = 4.0;
    ms.masks[1].alpha = 6.0;

    const GradientCheck gc = check_gradients(rp, ms, 1e-6, 1);
    CAPTURE(gc.worst_variable);
    CAPTURE(gc.analytic);
    CAPTURE(gc.numeric);
    CHECK(gc.max_rel_error <= 1e-3);
  }
}
