#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "hexpress/masks.hpp"
#include "hexpress/mesh.hpp"
#include "hexpress/problem.hpp"

namespace hexpress {

struct IterateRow {
  int iter;  // 1-based
  double objective, vol_frac, gsi, g1, g2;
};

struct OptimizationResult {
  MaskSet masks;
  std::vector<double> rho;
  HexMesh mesh;       // smoothed geometry when smoothing is enabled
  Eigen::VectorXd p;  // nodal pressure of the final design
  Eigen::VectorXd u;  // displacement of the final design
  std::vector<IterateRow> log;
  bool stagnated = false;
};

/// Called after each logged iteration (snapshot cadence applied by the caller
/// of run_optimization via OptimizerConfig::snapshot_every).
using IterationCallback =
    std::function<void(const IterateRow&, const MaskSet&, const std::vector<double>&)>;

/// The outer optimization loop: mask densities, pressure and elasticity
/// solves, adjoint sensitivities, one scaled MMA step, step relaxation and
/// optional in-loop boundary smoothing per iteration. Deterministic: the same
/// problem yields the same iterate log. Stops at max_iters or once the design
/// stalls (max |change| < stagnation_tol for stagnation_iters iterations).
OptimizationResult run_optimization(const ResolvedProblem& rp,
                                    const IterationCallback& on_iteration = {});

}  // namespace hexpress
