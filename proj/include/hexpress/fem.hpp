#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "hexpress/mesh.hpp"

namespace hexpress {

using SparseMat = Eigen::SparseMatrix<double>;

struct MaterialParams {
  double E1 = 1e7;        // Young's modulus, solid [N/m^2]
  double E_min = 1e7 * 1e-6;  // Young's modulus, void [N/m^2]
  double zeta = 1.0;      // SIMP exponent
  double nu = 0.3;        // Poisson ratio
  double thickness = 1e-3;  // out-of-plane thickness [m]

  void validate() const;

  /// Elementwise modulus E_min + rho^zeta (E1 - E_min) and its rho-derivative.
  double modulus(double rho) const;
  double modulus_derivative(double rho) const;
};

/// Plane-stress stiffness of one hexagonal element, 12x12, dof order
/// (u_x0, u_y0, ..., u_x5, u_y5).
Eigen::Matrix<double, 12, 12> element_stiffness(const std::array<Vec2, 6>& verts,
                                                double E, double nu, double thickness);

/// Global stiffness with modulus interpolated from per-element densities.
SparseMat assemble_stiffness(const HexMesh& mesh, const std::vector<double>& rho,
                             const MaterialParams& mat);

/// Extra point stiffnesses (output springs): dof index -> added diagonal value.
struct PointSpring {
  int dof;
  double stiffness;
};

void add_springs(SparseMat& K, const std::vector<PointSpring>& springs);

/// Solves K u = F with the listed dofs fixed at zero, by eliminating them from
/// the system (sparse Cholesky on the free block). Fixed dofs come back
/// exactly zero. Throws if the reduced system is not positive definite.
Eigen::VectorXd solve_displacement(const SparseMat& K, const Eigen::VectorXd& F,
                                   const std::vector<int>& fixed_dofs);

}  // namespace hexpress
