#include "hexpress/adjoint.hpp"

#include <cmath>
#include <stdexcept>

#include "hexpress/wachspress.hpp"

namespace hexpress {
namespace {

Eigen::Matrix<double, 12, 1> gather_dofs(const std::array<int, 6>& elem,
                                         const Eigen::VectorXd& x) {
  Eigen::Matrix<double, 12, 1> xe;
  for (int a = 0; a < 6; ++a) {
    xe[2 * a] = x[2 * elem[a]];
    xe[2 * a + 1] = x[2 * elem[a] + 1];
  }
  return xe;
}

Eigen::Matrix<double, 6, 1> gather_nodes(const std::array<int, 6>& elem,
                                         const Eigen::VectorXd& x) {
  Eigen::Matrix<double, 6, 1> xe;
  for (int a = 0; a < 6; ++a) xe[a] = x[elem[a]];
  return xe;
}

}  // namespace

double objective_value(const ObjectiveSpec& obj, const ForwardState& st) {
  const double SE = st.u.dot(st.K * st.u);
  if (obj.kind == ObjectiveKind::Compliance) return 2.0 * SE;
  if (st.v.size() == 0)
    throw std::invalid_argument("objective_value: multicriteria requires the dummy solve v");
  if (SE <= 0.0)
    throw std::runtime_error("objective_value: degenerate state, strain energy is zero");
  const double MSE = st.v.dot(st.K * st.u);
  return -obj.chi * MSE / SE;
}

double volume_fraction(const HexMesh& mesh, const std::vector<double>& rho) {
  double num = 0.0, den = 0.0;
  for (int i = 0; i < mesh.num_elements(); ++i) {
    const double area = mesh.deformed() ? polygon_area(mesh.element_coords(i))
                                        : mesh.element_area();
    num += area * rho[i];
    den += area;
  }
  return num / den;
}

double grayscale_indicator(const std::vector<double>& rho) {
  double s = 0.0;
  for (double r : rho) s += 4.0 * r * (1.0 - r);
  return s / static_cast<double>(rho.size());
}

std::pair<double, double> constraint_values(const HexMesh& mesh, const std::vector<double>& rho,
                                            const ConstraintSpec& cs) {
  const double g1 = volume_fraction(mesh, rho) / cs.V_star - 1.0;
  const double g2 = grayscale_indicator(rho) - cs.delta;
  return {g1, g2};
}

std::vector<double> volume_sensitivity(const HexMesh& mesh, const ConstraintSpec& cs) {
  std::vector<double> g(mesh.num_elements());
  double total = 0.0;
  std::vector<double> area(mesh.num_elements());
  for (int i = 0; i < mesh.num_elements(); ++i) {
    area[i] = mesh.deformed() ? polygon_area(mesh.element_coords(i)) : mesh.element_area();
    total += area[i];
  }
  for (int i = 0; i < mesh.num_elements(); ++i) g[i] = area[i] / (total * cs.V_star);
  return g;
}

std::vector<double> grayscale_sensitivity(const std::vector<double>& rho) {
  std::vector<double> g(rho.size());
  for (size_t i = 0; i < rho.size(); ++i)
    g[i] = 4.0 * (1.0 - 2.0 * rho[i]) / static_cast<double>(rho.size());
  return g;
}

std::vector<double> objective_sensitivity(const ObjectiveSpec& obj, const ForwardState& st,
                                          bool include_load_term) {
  const HexMesh& mesh = *st.mesh;
  if (static_cast<int>(st.rho.size()) != mesh.num_elements())
    throw std::invalid_argument("objective_sensitivity: stale or mismatched state");

  // Displacement-side multiplier lambda1 with lambda1 = -K^{-1} df/du. For
  // compliance (f = 2 u^T K u) it collapses to -4u; for the multicriteria
  // ratio it combines u and v.
  const double SE = st.u.dot(st.K * st.u);
  Eigen::VectorXd lambda1;
  double chi = obj.chi;
  double MSE = 0.0;
  if (obj.kind == ObjectiveKind::Compliance) {
    lambda1 = -4.0 * st.u;
  } else {
    if (SE <= 0.0) throw std::runtime_error("objective_sensitivity: zero strain energy");
    MSE = st.v.dot(st.K * st.u);
    lambda1 = chi / SE * st.v - 2.0 * chi * MSE / (SE * SE) * st.u;
  }

  // Pressure-side multiplier: lambda2 = -A_ff^{-1} (T^T lambda1)_f, zero at
  // Dirichlet pressure nodes.
  Eigen::VectorXd lambda2 = Eigen::VectorXd::Zero(mesh.num_nodes());
  if (include_load_term) {
    std::vector<int> constrained;
    constrained.reserve(st.pressure_bc.size());
    for (const auto& [node, value] : st.pressure_bc) constrained.push_back(node);
    const Eigen::VectorXd rhs = -(st.T.transpose() * lambda1);
    lambda2 = ReducedSolver(st.A, constrained).solve(rhs);
  }

  Eigen::Matrix<double, 12, 12> k0_shared;
  ElementFlowParts flow_shared;
  if (!mesh.deformed()) {
    k0_shared = element_stiffness(mesh.element_coords(0), 1.0, st.mat.nu, st.mat.thickness);
    flow_shared = element_flow_parts(mesh.element_coords(0), st.mat.thickness);
  }

  std::vector<double> dfdrho(mesh.num_elements());
  for (int i = 0; i < mesh.num_elements(); ++i) {
    const auto& elem = mesh.elements()[i];
    const auto k0 = mesh.deformed()
                        ? element_stiffness(mesh.element_coords(i), 1.0, st.mat.nu,
                                            st.mat.thickness)
                        : k0_shared;
    const double dE = st.mat.modulus_derivative(st.rho[i]);
    const auto ue = gather_dofs(elem, st.u);
    const Eigen::Matrix<double, 12, 1> k0u = k0 * ue;

    double val;
    if (obj.kind == ObjectiveKind::Compliance) {
      // explicit 2 u^T K' u plus lambda1^T K' u = -4 u^T K' u
      val = -2.0 * dE * ue.dot(k0u);
    } else {
      const auto ve = gather_dofs(elem, st.v);
      // explicit term + lambda1^T K' u + lambda3^T K' v, lambda3 = chi u / SE
      const double uKu = dE * ue.dot(k0u);
      const double vKu = dE * ve.dot(k0u);
      val = chi * (vKu / SE - MSE / (SE * SE) * uKu);
    }

    if (include_load_term) {
      const ElementFlowParts parts =
          mesh.deformed() ? element_flow_parts(mesh.element_coords(i), st.mat.thickness)
                          : flow_shared;
      const double dK = flow_coefficient_derivative(st.rho[i], st.pmp);
      const double dD = drainage_coefficient_derivative(st.rho[i], st.pmp);
      const auto pe = gather_nodes(elem, st.p);
      const auto l2e = gather_nodes(elem, lambda2);
      val += l2e.dot((dK * parts.laplace + dD * parts.mass) * pe);
    }
    dfdrho[i] = val;
  }
  return dfdrho;
}

Eigen::VectorXd chain_to_masks(const std::vector<double>& dfdrho, const DensityField& field,
                               int n_masks) {
  if (dfdrho.size() != field.jac.size())
    throw std::invalid_argument("chain_to_masks: size mismatch");

  Eigen::VectorXd dfdpsi = Eigen::VectorXd::Zero(kMaskVars * n_masks);
  for (size_t i = 0; i < field.jac.size(); ++i)
    for (const auto& e : field.jac[i])
      for (int k = 0; k < kMaskVars; ++k)
        dfdpsi[kMaskVars * e.mask + k] += dfdrho[i] * e.d[k];
  return dfdpsi;
}

}  // namespace hexpress
