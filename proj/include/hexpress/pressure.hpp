#pragma once

#include <map>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hexpress/mesh.hpp"

namespace hexpress {

using SparseMat = Eigen::SparseMatrix<double>;

struct PressureModelParams {
  double K_V = 1.0;       // void flow coefficient [m^4/(N s)]
  double K_S = 1e-7;      // solid flow coefficient
  double eta_K = 0.3, beta_K = 10.0;   // flow Heaviside step / slope
  double eta_D = 0.3, beta_D = 10.0;   // drainage Heaviside step / slope
  double r = 0.1;         // remaining pressure fraction at depth delta_s
  double delta_s = 0.0;   // penetration depth [m]; 0 = derive from mesh
  double p_ext = 0.0;     // external pressure (zero throughout)
  double p_in = 1e5;      // input pressure [N/m^2]

  double flow_contrast() const { return K_S / K_V; }
  double drainage_solid() const;  // D_S = (ln r / delta_s)^2 K_S

  void validate() const;

  /// Fills delta_s with 2x the element width when left unset.
  void resolve_penetration_depth(double cell_width);
};

/// tanh-form projection; exactly 0 at rho=0 and 1 at rho=1.
double smooth_heaviside(double rho, double eta, double beta);
double smooth_heaviside_derivative(double rho, double eta, double beta);

double flow_coefficient(double rho, const PressureModelParams& p);
double flow_coefficient_derivative(double rho, const PressureModelParams& p);
double drainage_coefficient(double rho, const PressureModelParams& p);
double drainage_coefficient_derivative(double rho, const PressureModelParams& p);

/// Geometry-only element integrals: laplace = int Bp^T Bp dV,
/// mass = int Np^T Np dV. The element flow matrix is K*laplace + D*mass and
/// its density derivative K'*laplace + D'*mass.
struct ElementFlowParts {
  Eigen::Matrix<double, 6, 6> laplace;
  Eigen::Matrix<double, 6, 6> mass;
};

ElementFlowParts element_flow_parts(const std::array<Vec2, 6>& verts, double thickness);

/// Global flow matrix A = sum_i int( K Bp^T Bp + D Np^T Np ) dV.
/// `drainage=false` drops the D term (used for the model verification runs).
SparseMat assemble_flow(const HexMesh& mesh, const std::vector<double>& rho,
                        const PressureModelParams& params, double thickness,
                        bool drainage = true);

/// Solves A p = 0 subject to prescribed nodal pressures.
Eigen::VectorXd solve_pressure(const SparseMat& A, const std::map<int, double>& bc);

/// Density-independent transformation matrix T (2*nn x nn); F = -T p.
SparseMat assemble_transform(const HexMesh& mesh, double thickness);

Eigen::VectorXd nodal_forces(const SparseMat& T, const Eigen::VectorXd& p);

}  // namespace hexpress
