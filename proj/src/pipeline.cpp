#include "hexpress/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hexpress {
namespace {

double* mask_var(Mask& m, int v) {
  switch (v) {
    case 0: return &m.x;
    case 1: return &m.y;
    case 2: return &m.a;
    case 3: return &m.b;
    case 4: return &m.theta;
    case 5: return &m.alpha;
    default: return &m.gamma;
  }
}

}  // namespace

ForwardState evaluate_forward(const ResolvedProblem& rp, const std::vector<double>& rho,
                              const HexMesh* mesh) {
  const HexMesh& m = mesh ? *mesh : rp.mesh;
  if (static_cast<int>(rho.size()) != m.num_elements())
    throw std::invalid_argument("evaluate_forward: density size mismatch");

  ForwardState st;
  st.mesh = &m;
  st.rho = rho;
  st.mat = rp.spec.material;
  st.pmp = rp.spec.pressure;
  st.fixed_dofs = rp.fixed_dofs;
  st.pressure_bc = rp.pressure_bc;

  st.A = assemble_flow(m, rho, st.pmp, st.mat.thickness);
  st.p = solve_pressure(st.A, st.pressure_bc);
  st.T = assemble_transform(m, st.mat.thickness);
  const Eigen::VectorXd F = nodal_forces(st.T, st.p);

  st.K = assemble_stiffness(m, rho, st.mat);
  add_springs(st.K, rp.springs);
  st.u = solve_displacement(st.K, F, st.fixed_dofs);

  if (rp.spec.objective == ObjectiveKind::Multicriteria) {
    Eigen::VectorXd Fd = Eigen::VectorXd::Zero(2 * m.num_nodes());
    if (rp.dummy_dof < 0) throw std::logic_error("evaluate_forward: mechanism without output dof");
    Fd[rp.dummy_dof] = rp.dummy_sign;
    st.v = solve_displacement(st.K, Fd, st.fixed_dofs);
  }
  return st;
}

DesignEvaluation evaluate_design(const ResolvedProblem& rp, const MaskSet& ms) {
  DensityField field = density_with_jacobian(ms, rp.mesh);
  rp.apply_passive(field);

  const ForwardState st = evaluate_forward(rp, field.rho);
  const ObjectiveSpec obj = rp.objective_spec();
  const int n_masks = static_cast<int>(ms.masks.size());

  DesignEvaluation ev;
  ev.objective = objective_value(obj, st);
  std::tie(ev.g1, ev.g2) = constraint_values(rp.mesh, field.rho, rp.spec.constraints);
  ev.dobj = chain_to_masks(objective_sensitivity(obj, st), field, n_masks);
  ev.dg1 = chain_to_masks(volume_sensitivity(rp.mesh, rp.spec.constraints), field, n_masks);
  ev.dg2 = chain_to_masks(grayscale_sensitivity(field.rho), field, n_masks);
  return ev;
}

GradientCheck check_gradients(const ResolvedProblem& rp, const MaskSet& ms, double h_rel,
                              int stride) {
  if (stride < 1) throw std::invalid_argument("check_gradients: stride must be >= 1");
  const DesignEvaluation base = evaluate_design(rp, ms);
  const int n = static_cast<int>(ms.masks.size()) * kMaskVars;
  const double gmax = std::max(base.dobj.cwiseAbs().maxCoeff(), 1e-30);

  auto objective_at = [&](const MaskSet& probe) {
    std::vector<double> rho = density_field(probe, rp.mesh);
    rp.apply_passive(rho);
    return objective_value(rp.objective_spec(), evaluate_forward(rp, rho));
  };

  GradientCheck gc;
  for (int k = 0; k < n; k += stride) {
    const int j = k / kMaskVars, v = k % kMaskVars;
    const double span = ms.bounds.upper[v] - ms.bounds.lower[v];
    const double h = h_rel * std::max(std::abs(*mask_var(const_cast<Mask&>(ms.masks[j]), v)),
                                      span > 0 ? span : 1.0);

    MaskSet probe = ms;
    *mask_var(probe.masks[j], v) += h;
    const double fp = objective_at(probe);
    *mask_var(probe.masks[j], v) -= 2 * h;
    const double fm = objective_at(probe);

    const double numeric = (fp - fm) / (2 * h);
    const double analytic = base.dobj[k];
    // Relative to the component itself when significant; components far below
    // the gradient scale are compared against that scale instead, since their
    // finite differences are dominated by linear-solver noise.
    const double rel = std::abs(analytic - numeric) / std::max(std::abs(numeric), 1e-2 * gmax);
    if (rel > gc.max_rel_error) {
      gc.max_rel_error = rel;
      gc.worst_variable = k;
      gc.analytic = analytic;
      gc.numeric = numeric;
    }
  }
  return gc;
}

}  // namespace hexpress
