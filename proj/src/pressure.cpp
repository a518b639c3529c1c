#include "hexpress/pressure.hpp"

#include <cmath>
#include <stdexcept>

#include "hexpress/linalg.hpp"
#include "hexpress/wachspress.hpp"

namespace hexpress {

double PressureModelParams::drainage_solid() const {
  const double lr = std::log(r) / delta_s;
  return lr * lr * K_S;
}

void PressureModelParams::validate() const {
  if (!(K_V > K_S) || !(K_S > 0.0))
    throw std::invalid_argument("PressureModelParams: require K_V > K_S > 0");
  if (!(beta_K > 0.0) || !(beta_D > 0.0))
    throw std::invalid_argument("PressureModelParams: Heaviside slopes must be > 0");
  if (eta_K <= 0.0 || eta_K >= 1.0 || eta_D <= 0.0 || eta_D >= 1.0)
    throw std::invalid_argument("PressureModelParams: eta in (0,1)");
  if (r <= 0.0 || r >= 1.0) throw std::invalid_argument("PressureModelParams: r in (0,1)");
  if (!(delta_s > 0.0))
    throw std::invalid_argument("PressureModelParams: delta_s must be resolved and > 0");
}

void PressureModelParams::resolve_penetration_depth(double cell_width) {
  if (delta_s <= 0.0) delta_s = 2.0 * cell_width;
}

double smooth_heaviside(double rho, double eta, double beta) {
  return (std::tanh(beta * eta) + std::tanh(beta * (rho - eta))) /
         (std::tanh(beta * eta) + std::tanh(beta * (1.0 - eta)));
}

double smooth_heaviside_derivative(double rho, double eta, double beta) {
  const double t = std::tanh(beta * (rho - eta));
  return beta * (1.0 - t * t) /
         (std::tanh(beta * eta) + std::tanh(beta * (1.0 - eta)));
}

double flow_coefficient(double rho, const PressureModelParams& p) {
  return p.K_V * (1.0 - (1.0 - p.flow_contrast()) * smooth_heaviside(rho, p.eta_K, p.beta_K));
}

double flow_coefficient_derivative(double rho, const PressureModelParams& p) {
  return -p.K_V * (1.0 - p.flow_contrast()) *
         smooth_heaviside_derivative(rho, p.eta_K, p.beta_K);
}

double drainage_coefficient(double rho, const PressureModelParams& p) {
  return p.drainage_solid() * smooth_heaviside(rho, p.eta_D, p.beta_D);
}

double drainage_coefficient_derivative(double rho, const PressureModelParams& p) {
  return p.drainage_solid() * smooth_heaviside_derivative(rho, p.eta_D, p.beta_D);
}

ElementFlowParts element_flow_parts(const std::array<Vec2, 6>& verts, double thickness) {
  ElementFlowParts parts;
  parts.laplace.setZero();
  parts.mass.setZero();
  for (const QuadPoint& q : hexagon_quadrature(verts)) {
    const auto N = wachspress::shape_functions(verts, q.point);
    const auto g = wachspress::shape_gradients(verts, q.point);
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b) {
        parts.laplace(a, b) += q.weight * thickness * g[a].dot(g[b]);
        parts.mass(a, b) += q.weight * thickness * N[a] * N[b];
      }
  }
  return parts;
}

SparseMat assemble_flow(const HexMesh& mesh, const std::vector<double>& rho,
                        const PressureModelParams& params, double thickness,
                        bool drainage) {
  if (static_cast<int>(rho.size()) != mesh.num_elements())
    throw std::invalid_argument("assemble_flow: density size mismatch");

  ElementFlowParts shared;
  if (!mesh.deformed()) shared = element_flow_parts(mesh.element_coords(0), thickness);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_elements()) * 36);
  for (int i = 0; i < mesh.num_elements(); ++i) {
    const ElementFlowParts parts =
        mesh.deformed() ? element_flow_parts(mesh.element_coords(i), thickness) : shared;
    const double K = flow_coefficient(rho[i], params);
    const double D = drainage ? drainage_coefficient(rho[i], params) : 0.0;
    const auto& elem = mesh.elements()[i];
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        trips.emplace_back(elem[a], elem[b], K * parts.laplace(a, b) + D * parts.mass(a, b));
  }

  SparseMat A(mesh.num_nodes(), mesh.num_nodes());
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

Eigen::VectorXd solve_pressure(const SparseMat& A, const std::map<int, double>& bc) {
  const int n = static_cast<int>(A.rows());
  if (bc.empty())
    throw std::runtime_error(
        "solve_pressure: no Dirichlet pressure node prescribed; system is singular");

  std::vector<int> constrained;
  Eigen::VectorXd values = Eigen::VectorXd::Zero(n);
  for (const auto& [node, value] : bc) {
    constrained.push_back(node);
    values[node] = value;
  }
  return ReducedSolver(A, constrained).solve(Eigen::VectorXd::Zero(n), values);
}

SparseMat assemble_transform(const HexMesh& mesh, double thickness) {
  // T_i = int Nu^T Bp dV, so rows are displacement dofs, columns pressure dofs;
  // the consistent load is F = -T p = -int Nu^T grad(p) dV.
  Eigen::Matrix<double, 12, 6> shared;
  auto element_T = [&](int i) {
    Eigen::Matrix<double, 12, 6> Ti = Eigen::Matrix<double, 12, 6>::Zero();
    const auto verts = mesh.element_coords(i);
    for (const QuadPoint& q : hexagon_quadrature(verts)) {
      const auto N = wachspress::shape_functions(verts, q.point);
      const auto g = wachspress::shape_gradients(verts, q.point);
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b) {
          Ti(2 * a, b) += q.weight * thickness * N[a] * g[b].x();
          Ti(2 * a + 1, b) += q.weight * thickness * N[a] * g[b].y();
        }
    }
    return Ti;
  };
  if (!mesh.deformed()) shared = element_T(0);

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_elements()) * 72);
  for (int i = 0; i < mesh.num_elements(); ++i) {
    const Eigen::Matrix<double, 12, 6> Ti = mesh.deformed() ? element_T(i) : shared;
    const auto& elem = mesh.elements()[i];
    for (int a = 0; a < 6; ++a)
      for (int da = 0; da < 2; ++da)
        for (int b = 0; b < 6; ++b)
          trips.emplace_back(2 * elem[a] + da, elem[b], Ti(2 * a + da, b));
  }
  SparseMat T(2 * mesh.num_nodes(), mesh.num_nodes());
  T.setFromTriplets(trips.begin(), trips.end());
  return T;
}

Eigen::VectorXd nodal_forces(const SparseMat& T, const Eigen::VectorXd& p) {
  return -T * p;
}

}  // namespace hexpress
