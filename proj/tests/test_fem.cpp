#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hexpress/fem.hpp"

using namespace hexpress;

namespace {

std::array<Vec2, 6> regular_hexagon(double edge) {
  std::array<Vec2, 6> v;
  for (int k = 0; k < 6; ++k) {
    const double ang = -M_PI / 2.0 + k * M_PI / 3.0;
    v[k] = edge * Vec2(std::cos(ang), std::sin(ang));
  }
  return v;
}

}  // namespace

TEST_CASE("material interpolation endpoints and derivative") {
  MaterialParams mat;
  mat.E1 = 1e7;
  mat.E_min = 10.0;
  mat.zeta = 1.0;
  CHECK(mat.modulus(1.0) == doctest::Approx(1e7));
  CHECK(mat.modulus(0.0) == doctest::Approx(10.0));
  CHECK(mat.modulus(0.5) == doctest::Approx(10.0 + 0.5 * (1e7 - 10.0)));
  CHECK(mat.modulus_derivative(0.5) == doctest::Approx(1e7 - 10.0));

  mat.zeta = 3.0;
  const double h = 1e-6;
  const double fd = (mat.modulus(0.7 + h) - mat.modulus(0.7 - h)) / (2 * h);
  CHECK(mat.modulus_derivative(0.7) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("material validation rejects bad parameters") {
  MaterialParams mat;
  mat.E1 = -1;
  CHECK_THROWS(mat.validate());
  mat = MaterialParams{};
  mat.nu = 0.5;
  CHECK_THROWS(mat.validate());
  mat = MaterialParams{};
  mat.thickness = 0;
  CHECK_THROWS(mat.validate());
  mat = MaterialParams{};
  CHECK_NOTHROW(mat.validate());
}

TEST_CASE("element stiffness: symmetry, rigid modes, modulus scaling") {
  const auto v = regular_hexagon(0.01);
  const Eigen::Matrix<double, 12, 12> Ke = element_stiffness(v, 2.1e11, 0.3, 1e-3);

  CHECK((Ke - Ke.transpose()).cwiseAbs().maxCoeff() <= 1e-6 * Ke.cwiseAbs().maxCoeff());

  // Exactly three rigid body modes: two translations and one rotation.
  Eigen::VectorXd tx = Eigen::VectorXd::Zero(12), ty = Eigen::VectorXd::Zero(12),
                  rot(12);
  for (int k = 0; k < 6; ++k) {
    tx[2 * k] = 1;
    ty[2 * k + 1] = 1;
    rot[2 * k] = -v[k].y();
    rot[2 * k + 1] = v[k].x();
  }
  const double scale = Ke.cwiseAbs().maxCoeff();
  CHECK((Ke * tx).cwiseAbs().maxCoeff() <= 1e-9 * scale);
  CHECK((Ke * ty).cwiseAbs().maxCoeff() <= 1e-9 * scale);
  CHECK((Ke * rot).cwiseAbs().maxCoeff() <= 1e-9 * scale);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Ke);
  int null_dim = 0;
  for (int k = 0; k < 12; ++k)
    if (es.eigenvalues()[k] < 1e-9 * es.eigenvalues()[11]) ++null_dim;
  CHECK(null_dim == 3);

  // Linear in E, linear in thickness.
  const auto Ke2 = element_stiffness(v, 2 * 2.1e11, 0.3, 1e-3);
  CHECK((Ke2 - 2 * Ke).cwiseAbs().maxCoeff() <= 1e-6 * scale);
  const auto Ke3 = element_stiffness(v, 2.1e11, 0.3, 3e-3);
  CHECK((Ke3 - 3 * Ke).cwiseAbs().maxCoeff() <= 1e-6 * scale);
}

TEST_CASE("assembly matches a dense scatter of element matrices") {
  const HexMesh m = HexMesh::generate(3, 2, 0.3, 0.2);
  MaterialParams mat;
  std::vector<double> rho(m.num_elements());
  for (int i = 0; i < m.num_elements(); ++i) rho[i] = 0.15 + 0.1 * i;

  const SparseMat K = assemble_stiffness(m, rho, mat);
  REQUIRE(K.rows() == 2 * m.num_nodes());

  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(K.rows(), K.cols());
  for (int e = 0; e < m.num_elements(); ++e) {
    const auto Ke =
        element_stiffness(m.element_coords(e), mat.modulus(rho[e]), mat.nu, mat.thickness);
    const auto& conn = m.elements()[e];
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        for (int da = 0; da < 2; ++da)
          for (int db = 0; db < 2; ++db)
            dense(2 * conn[a] + da, 2 * conn[b] + db) += Ke(2 * a + da, 2 * b + db);
  }
  const Eigen::MatrixXd diff = Eigen::MatrixXd(K) - dense;
  CHECK(diff.cwiseAbs().maxCoeff() <= 1e-10 * dense.cwiseAbs().maxCoeff());

  // Global matrix keeps the translation null space.
  Eigen::VectorXd tx = Eigen::VectorXd::Zero(K.rows());
  for (int n = 0; n < m.num_nodes(); ++n) tx[2 * n] = 1;
  CHECK((K * tx).cwiseAbs().maxCoeff() <= 1e-9 * dense.cwiseAbs().maxCoeff());
}

TEST_CASE("springs add to the diagonal only") {
  const HexMesh m = HexMesh::generate(2, 1, 0.2, 0.1);
  MaterialParams mat;
  std::vector<double> rho(m.num_elements(), 1.0);
  SparseMat K = assemble_stiffness(m, rho, mat);
  const Eigen::MatrixXd before(K);
  add_springs(K, {{3, 5e4}, {3, 1e4}, {0, 2.0}});
  Eigen::MatrixXd after(K);
  after(3, 3) -= 6e4;
  after(0, 0) -= 2.0;
  CHECK((after - before).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("solver: zero load, exact fixed dofs, linearity") {
  const HexMesh m = HexMesh::generate(4, 3, 0.4, 0.3);
  MaterialParams mat;
  std::vector<double> rho(m.num_elements(), 1.0);
  const SparseMat K = assemble_stiffness(m, rho, mat);

  std::vector<int> fixed;
  for (int n = 0; n < m.num_nodes(); ++n)
    if (m.nodes()[n].x() < 1e-9) {
      fixed.push_back(2 * n);
      fixed.push_back(2 * n + 1);
    }
  REQUIRE(fixed.size() >= 4);

  Eigen::VectorXd F = Eigen::VectorXd::Zero(K.rows());
  CHECK(solve_displacement(K, F, fixed).cwiseAbs().maxCoeff() == 0.0);

  F[K.rows() - 1] = 1.0;
  F[5] = -2.0;
  const Eigen::VectorXd u = solve_displacement(K, F, fixed);
  for (int d : fixed) CHECK(u[d] == 0.0);
  CHECK(u.cwiseAbs().maxCoeff() > 0.0);

  const Eigen::VectorXd u3 = solve_displacement(K, Eigen::VectorXd(3.0 * F), fixed);
  CHECK((u3 - 3.0 * u).cwiseAbs().maxCoeff() <= 1e-9 * u.cwiseAbs().maxCoeff());

  // Residual on free dofs.
  Eigen::VectorXd r = K * u - F;
  for (int d : fixed) r[d] = 0;
  CHECK(r.cwiseAbs().maxCoeff() <= 1e-7 * F.cwiseAbs().maxCoeff());
}

TEST_CASE("solver rejects a floating structure") {
  const HexMesh m = HexMesh::generate(2, 2, 0.2, 0.2);
  MaterialParams mat;
  std::vector<double> rho(m.num_elements(), 1.0);
  const SparseMat K = assemble_stiffness(m, rho, mat);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(K.rows());
  F[0] = 1.0;
  CHECK_THROWS(solve_displacement(K, F, {}));
}

TEST_CASE("stiff vs soft density fields bracket the response") {
  const HexMesh m = HexMesh::generate(4, 2, 0.4, 0.2);
  MaterialParams mat;
  std::vector<int> fixed;
  for (int n = 0; n < m.num_nodes(); ++n)
    if (m.nodes()[n].x() < 1e-9) {
      fixed.push_back(2 * n);
      fixed.push_back(2 * n + 1);
    }
  Eigen::VectorXd F = Eigen::VectorXd::Zero(2 * m.num_nodes());
  F[2 * m.num_nodes() - 1] = 1.0;

  std::vector<double> solid(m.num_elements(), 1.0), soft(m.num_elements(), 0.2);
  const Eigen::VectorXd us =
      solve_displacement(assemble_stiffness(m, solid, mat), F, fixed);
  const Eigen::VectorXd uw =
      solve_displacement(assemble_stiffness(m, soft, mat), F, fixed);
  CHECK(us.dot(F) < uw.dot(F));  // softer structure is more compliant
  // With zeta = 1 the soft response scales like 1/rho up to E_min effects.
  CHECK(uw.dot(F) == doctest::Approx(us.dot(F) / 0.2).epsilon(1e-4));
}
