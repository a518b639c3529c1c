#pragma once

#include <string>
#include <vector>

#include "hexpress/mesh.hpp"

namespace hexpress {

/// One negative elliptical mask: five geometric variables plus the material
/// dilation (alpha, logistic sharpness) and erosion (gamma, exponent)
/// variables. Material is removed inside the ellipse.
struct Mask {
  double x = 0, y = 0;       // center [m]
  double a = 0, b = 0;       // semi-axes [m]
  double theta = 0;          // orientation [rad]
  double alpha = 1;          // dilation
  double gamma = 1;          // erosion
};

/// Per-variable bounds, in the fixed order (x, y, a, b, theta, alpha, gamma).
constexpr int kMaskVars = 7;

struct MaskBounds {
  double lower[kMaskVars];
  double upper[kMaskVars];
};

struct MaskSet {
  std::vector<Mask> masks;
  MaskBounds bounds;

  /// Uniform grid of N_mx x N_my circular masks over [0,Lx]x[0,Ly], radius
  /// 0.5*mR, with bounds built from the mask radius parameter mR.
  static MaskSet seed_grid(int n_mx, int n_my, double L_x, double L_y, double mR,
                           double f_l = 0.001, double f_u = 1.0,
                           double alpha_max = 30.0, double gamma_max = 30.0);

  void clip_to_bounds();
};

/// d = (X/a)^2 + (Y/b)^2 - 1 in the mask's rotated frame; negative inside.
double signed_measure(const Mask& m, const Vec2& p);

/// Logistic factor 1/(1+exp(-alpha d)); the exponent is clamped to +-500.
double logistic_density(double alpha, double d);

struct DensityField {
  std::vector<double> rho;  // per element, in (0,1)

  /// Sparse Jacobian d(rho_i)/d(psi_jk): per element, a list of
  /// (mask index, 7 partials). Entries below the pruning threshold are dropped.
  struct Entry {
    int mask;
    double d[kMaskVars];
  };
  std::vector<std::vector<Entry>> jac;  // indexed by element
};

/// rho_i = prod_j logistic(alpha_j, d_ij)^{gamma_j} at element centroids.
std::vector<double> density_field(const MaskSet& ms, const HexMesh& mesh);

/// Densities plus all seven analytic partials per (element, mask) pair.
DensityField density_with_jacobian(const MaskSet& ms, const HexMesh& mesh,
                                   double prune_tol = 1e-14);

/// Plain-text 7-column table, one mask per line (restart format).
std::string masks_to_table(const MaskSet& ms);
std::vector<Mask> masks_from_table(const std::string& text);

}  // namespace hexpress
