#pragma once

#include <vector>

#include "hexpress/adjoint.hpp"
#include "hexpress/masks.hpp"
#include "hexpress/problem.hpp"

namespace hexpress {

/// Full forward analysis at a given density field: flow solve, consistent
/// nodal forces, displacement solve(s). `mesh` defaults to the problem mesh;
/// pass a smoothed copy to analyze deformed geometry.
ForwardState evaluate_forward(const ResolvedProblem& rp, const std::vector<double>& rho,
                              const HexMesh* mesh = nullptr);

/// Objective and mask-variable gradient at one design point (no smoothing).
struct DesignEvaluation {
  double objective = 0.0;
  double g1 = 0.0, g2 = 0.0;
  Eigen::VectorXd dobj;  // 7 entries per mask
  Eigen::VectorXd dg1;
  Eigen::VectorXd dg2;
};

DesignEvaluation evaluate_design(const ResolvedProblem& rp, const MaskSet& ms);

/// Central-difference verification of the analytic design gradient.
struct GradientCheck {
  double max_rel_error = 0.0;  // over all probed variables
  int worst_variable = -1;
  double analytic = 0.0, numeric = 0.0;  // at the worst variable
};

GradientCheck check_gradients(const ResolvedProblem& rp, const MaskSet& ms,
                              double h_rel = 1e-6, int stride = 1);

}  // namespace hexpress
