#include "hexpress/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include "hexpress/adjoint.hpp"
#include "hexpress/mma.hpp"
#include "hexpress/pipeline.hpp"
#include "hexpress/smoothing.hpp"

namespace hexpress {
namespace {

double get_var(const Mask& m, int v) {
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

void set_var(Mask& m, int v, double val) {
  switch (v) {
    case 0: m.x = val; break;
    case 1: m.y = val; break;
    case 2: m.a = val; break;
    case 3: m.b = val; break;
    case 4: m.theta = val; break;
    case 5: m.alpha = val; break;
    default: m.gamma = val; break;
  }
}

std::vector<int> frozen_boundary_nodes(const ResolvedProblem& rp) {
  std::set<int> nodes;
  for (int dof : rp.fixed_dofs) nodes.insert(dof / 2);
  for (const auto& [n, unused] : rp.pressure_bc) nodes.insert(n);
  return {nodes.begin(), nodes.end()};
}

}  // namespace

OptimizationResult run_optimization(const ResolvedProblem& rp, const IterationCallback& on_iteration) {
  const ProblemSpec& ps = rp.spec;
  if (ps.analysis_only)
    throw std::invalid_argument("run_optimization: problem is analysis-only");
  const OptimizerConfig& oc = ps.opt;
  const HexMesh& mesh = rp.mesh;

  MaskSet masks = MaskSet::seed_grid(oc.n_mx, oc.n_my, mesh.extent_x(), mesh.extent_y(),
                                     oc.mR_factor * mesh.edge_length(), 0.001, 1.0,
                                     oc.alpha_max, oc.gamma_max);
  const int n_masks = static_cast<int>(masks.masks.size());

  // MMA variable list: one scaled entry per unfrozen mask variable.
  std::vector<std::pair<int, int>> active;  // (mask, variable)
  for (int j = 0; j < n_masks; ++j)
    for (int v = 0; v < kMaskVars; ++v) {
      if (v == 5 && oc.freeze_alpha) continue;
      if (v == 6 && oc.freeze_gamma) continue;
      active.emplace_back(j, v);
    }
  const int n = static_cast<int>(active.size());
  auto span = [&](int v) { return masks.bounds.upper[v] - masks.bounds.lower[v]; };
  auto to_scaled = [&](const MaskSet& ms) {
    Eigen::VectorXd x(n);
    for (int k = 0; k < n; ++k) {
      auto [j, v] = active[k];
      x[k] = (get_var(ms.masks[j], v) - ms.bounds.lower[v]) / span(v);
    }
    return x;
  };
  auto from_scaled = [&](const Eigen::VectorXd& x, MaskSet& ms) {
    for (int k = 0; k < n; ++k) {
      auto [j, v] = active[k];
      set_var(ms.masks[j], v, ms.bounds.lower[v] + x[k] * span(v));
    }
    ms.clip_to_bounds();
  };

  MmaOptimizer::Params mma_prm;
  mma_prm.c = oc.mma_c;
  MmaOptimizer mma(n, 2, mma_prm);
  const Eigen::VectorXd xmin = Eigen::VectorXd::Zero(n);
  const Eigen::VectorXd xmax = Eigen::VectorXd::Ones(n);
  const std::vector<int> frozen = frozen_boundary_nodes(rp);

  const bool smooth_in_loop = ps.smoothing.beta > 0 && ps.smooth_each_iteration;
  const bool smooth_final = ps.smoothing.beta > 0;

  // Evaluates one design: densities, optional smoothing, full forward solve.
  struct Evaluated {
    DensityField field;
    HexMesh mesh;
    ForwardState st;
  };
  auto evaluate = [&](const MaskSet& ms, bool smooth) {
    Evaluated ev;
    ev.field = density_with_jacobian(ms, mesh);
    rp.apply_passive(ev.field);
    ev.mesh = mesh;
    if (smooth) {
      const auto loops = boundary_loops(mesh, ev.field.rho, ps.smoothing.threshold);
      ev.mesh.set_nodes(smooth_boundary(mesh, loops, ps.smoothing.beta, frozen));
    }
    ev.st = evaluate_forward(rp, ev.field.rho, &ev.mesh);
    return ev;
  };

  const ObjectiveSpec obj = rp.objective_spec();
  OptimizationResult res;
  int stall = 0;

  for (int iter = 1; iter <= oc.max_iters; ++iter) {
    try {
      const Evaluated ev = evaluate(masks, smooth_in_loop);

      const double f0 = objective_value(obj, ev.st);
      const auto [g1, g2] = constraint_values(ev.mesh, ev.field.rho, ps.constraints);

      const Eigen::VectorXd dobj =
          chain_to_masks(objective_sensitivity(obj, ev.st), ev.field, n_masks);
      const Eigen::VectorXd dg1 =
          chain_to_masks(volume_sensitivity(ev.mesh, ps.constraints), ev.field, n_masks);
      const Eigen::VectorXd dg2 =
          chain_to_masks(grayscale_sensitivity(ev.field.rho), ev.field, n_masks);

      Eigen::VectorXd df0dx(n);
      Eigen::MatrixXd dfdx(2, n);
      for (int k = 0; k < n; ++k) {
        auto [j, v] = active[k];
        const int flat = j * kMaskVars + v;
        df0dx[k] = dobj[flat] * span(v);
        dfdx(0, k) = dg1[flat] * span(v);
        dfdx(1, k) = dg2[flat] * span(v);
      }
      const Eigen::Vector2d fval(g1, g2);

      const Eigen::VectorXd x_old = to_scaled(masks);
      const Eigen::VectorXd x_cur = mma.step(x_old, df0dx, fval, dfdx, xmin, xmax);
      const Eigen::VectorXd x_new =
          relax_step(x_old, x_cur, oc.step).cwiseMax(xmin).cwiseMin(xmax);
      from_scaled(x_new, masks);

      // Stagnation measured on the raw variables.
      double dmax = 0.0;
      for (int k = 0; k < n; ++k) dmax = std::max(dmax, std::abs(x_new[k] - x_old[k]) * span(active[k].second));
      stall = dmax < oc.stagnation_tol ? stall + 1 : 0;

      IterateRow row{iter, f0, volume_fraction(ev.mesh, ev.field.rho),
                     grayscale_indicator(ev.field.rho), g1, g2};
      res.log.push_back(row);
      if (on_iteration) on_iteration(row, masks, ev.field.rho);

      if (stall >= oc.stagnation_iters) {
        res.stagnated = true;
        break;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("optimization iteration " + std::to_string(iter) + ": " +
                               e.what());
    }
  }

  const Evaluated fin = evaluate(masks, smooth_final);
  res.masks = masks;
  res.rho = fin.field.rho;
  res.mesh = fin.mesh;
  res.p = fin.st.p;
  res.u = fin.st.u;
  return res;
}

}  // namespace hexpress
