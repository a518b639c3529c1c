#pragma once

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hexpress/fem.hpp"
#include "hexpress/linalg.hpp"
#include "hexpress/masks.hpp"
#include "hexpress/mesh.hpp"
#include "hexpress/pressure.hpp"

namespace hexpress {

enum class ObjectiveKind { Compliance, Multicriteria };

struct ObjectiveSpec {
  ObjectiveKind kind = ObjectiveKind::Compliance;
  double chi = 1.0;      // scaling for the multicriteria objective
  int dummy_dof = -1;    // dof receiving the unit dummy load (mechanisms)
};

struct ConstraintSpec {
  double V_star = 0.5;   // allowed volume fraction
  double delta = 0.005;  // grayscale bound
};

/// Everything one optimization iterate holds fixed: solved state fields and
/// the operators they came from. Built by the optimizer, consumed here.
struct ForwardState {
  const HexMesh* mesh = nullptr;
  std::vector<double> rho;
  MaterialParams mat;
  PressureModelParams pmp;

  SparseMat A;           // flow matrix (with drainage)
  Eigen::VectorXd p;     // nodal pressures
  SparseMat T;           // pressure-to-force transform
  SparseMat K;           // stiffness including any output springs
  Eigen::VectorXd u;     // displacement under pressure load
  Eigen::VectorXd v;     // displacement under dummy load (mechanisms; else empty)

  std::vector<int> fixed_dofs;
  std::map<int, double> pressure_bc;
};

/// Compliance: 2 u^T K u. Multicriteria: -chi (v^T K u)/(u^T K u).
double objective_value(const ObjectiveSpec& obj, const ForwardState& st);

/// (g1, g2) with g1 = V/V* - 1 (area-weighted mean density) and
/// g2 = sum 4 rho (1-rho) / Nel - delta.
std::pair<double, double> constraint_values(const HexMesh& mesh, const std::vector<double>& rho,
                                            const ConstraintSpec& cs);

double grayscale_indicator(const std::vector<double>& rho);
double volume_fraction(const HexMesh& mesh, const std::vector<double>& rho);

/// Analytic d(objective)/d(rho_i), adjoint method, including the
/// design-dependent load term
/// (set include_load_term=false only to demonstrate its necessity).
std::vector<double> objective_sensitivity(const ObjectiveSpec& obj, const ForwardState& st,
                                          bool include_load_term = true);

std::vector<double> volume_sensitivity(const HexMesh& mesh, const ConstraintSpec& cs);
std::vector<double> grayscale_sensitivity(const std::vector<double>& rho);

/// Chain rule d f / d psi = (d f / d rho) * (d rho / d psi); flat layout, 7
/// entries per mask in the order (x, y, a, b, theta, alpha, gamma).
Eigen::VectorXd chain_to_masks(const std::vector<double>& dfdrho, const DensityField& field,
                               int n_masks);

}  // namespace hexpress
