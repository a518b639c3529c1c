#include "hexpress/fem.hpp"

#include <cmath>
#include <stdexcept>

#include "hexpress/linalg.hpp"
#include "hexpress/wachspress.hpp"

namespace hexpress {

void MaterialParams::validate() const {
  if (!(E1 > E_min) || !(E_min > 0.0))
    throw std::invalid_argument("MaterialParams: require E1 > E_min > 0");
  if (zeta < 1.0) throw std::invalid_argument("MaterialParams: zeta must be >= 1");
  if (nu < 0.0 || nu >= 0.5) throw std::invalid_argument("MaterialParams: nu in [0, 0.5)");
  if (!(thickness > 0.0)) throw std::invalid_argument("MaterialParams: thickness must be > 0");
}

double MaterialParams::modulus(double rho) const {
  return E_min + std::pow(rho, zeta) * (E1 - E_min);
}

double MaterialParams::modulus_derivative(double rho) const {
  if (zeta == 1.0) return E1 - E_min;
  return zeta * std::pow(rho, zeta - 1.0) * (E1 - E_min);
}

Eigen::Matrix<double, 12, 12> element_stiffness(const std::array<Vec2, 6>& verts,
                                                double E, double nu, double thickness) {
  if (polygon_area(verts) <= 0.0)
    throw std::invalid_argument("element_stiffness: degenerate or inverted element");

  Eigen::Matrix3d D;
  const double f = E / (1.0 - nu * nu);
  D << f, f * nu, 0.0,
       f * nu, f, 0.0,
       0.0, 0.0, f * (1.0 - nu) / 2.0;

  Eigen::Matrix<double, 12, 12> k = Eigen::Matrix<double, 12, 12>::Zero();
  for (const QuadPoint& q : hexagon_quadrature(verts)) {
    const auto g = wachspress::shape_gradients(verts, q.point);
    Eigen::Matrix<double, 3, 12> B = Eigen::Matrix<double, 3, 12>::Zero();
    for (int l = 0; l < 6; ++l) {
      B(0, 2 * l) = g[l].x();
      B(1, 2 * l + 1) = g[l].y();
      B(2, 2 * l) = g[l].y();
      B(2, 2 * l + 1) = g[l].x();
    }
    k += (q.weight * thickness) * B.transpose() * D * B;
  }
  return k;
}

SparseMat assemble_stiffness(const HexMesh& mesh, const std::vector<double>& rho,
                             const MaterialParams& mat) {
  if (static_cast<int>(rho.size()) != mesh.num_elements())
    throw std::invalid_argument("assemble_stiffness: density size mismatch");

  const int ndof = 2 * mesh.num_nodes();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(mesh.num_elements()) * 144);

  // On the undeformed lattice all cells are congruent and k0 is computed once;
  // after smoothing has moved nodes it is recomputed per element.
  Eigen::Matrix<double, 12, 12> k0_shared;
  if (!mesh.deformed())
    k0_shared = element_stiffness(mesh.element_coords(0), 1.0, mat.nu, mat.thickness);

  for (int i = 0; i < mesh.num_elements(); ++i) {
    const auto k0 = mesh.deformed()
                        ? element_stiffness(mesh.element_coords(i), 1.0, mat.nu, mat.thickness)
                        : k0_shared;
    const double E = mat.modulus(rho[i]);
    const auto& elem = mesh.elements()[i];
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        for (int da = 0; da < 2; ++da)
          for (int db = 0; db < 2; ++db)
            trips.emplace_back(2 * elem[a] + da, 2 * elem[b] + db,
                               E * k0(2 * a + da, 2 * b + db));
  }

  SparseMat K(ndof, ndof);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

void add_springs(SparseMat& K, const std::vector<PointSpring>& springs) {
  for (const PointSpring& s : springs) K.coeffRef(s.dof, s.dof) += s.stiffness;
}

Eigen::VectorXd solve_displacement(const SparseMat& K, const Eigen::VectorXd& F,
                                   const std::vector<int>& fixed_dofs) {
  if (F.size() != K.rows()) throw std::invalid_argument("solve_displacement: size mismatch");
  try {
    return ReducedSolver(K, fixed_dofs).solve(F);
  } catch (const std::runtime_error&) {
    throw std::runtime_error(
        "solve_displacement: stiffness is singular on the free dofs; "
        "the structure is insufficiently supported (rigid-body mode present)");
  }
}

}  // namespace hexpress
