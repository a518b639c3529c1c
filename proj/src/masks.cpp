#include "hexpress/masks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hexpress {
namespace {

constexpr double kExpClamp = 500.0;

inline double clamp_exp_arg(double t) { return std::clamp(t, -kExpClamp, kExpClamp); }

// log of the logistic factor, stable at both saturation ends
inline double log_logistic(double alpha, double d) {
  const double t = clamp_exp_arg(alpha * d);
  return t < 0.0 ? t - std::log1p(std::exp(t)) : -std::log1p(std::exp(-t));
}

}  // namespace

double signed_measure(const Mask& m, const Vec2& p) {
  if (!(m.a > 0.0) || !(m.b > 0.0))
    throw std::invalid_argument("signed_measure: mask axes must be positive");
  const double dx = p.x() - m.x, dy = p.y() - m.y;
  const double c = std::cos(m.theta), s = std::sin(m.theta);
  const double X = c * dx + s * dy;
  const double Y = -s * dx + c * dy;
  return (X / m.a) * (X / m.a) + (Y / m.b) * (Y / m.b) - 1.0;
}

double logistic_density(double alpha, double d) {
  return 1.0 / (1.0 + std::exp(clamp_exp_arg(-alpha * d)));
}

MaskSet MaskSet::seed_grid(int n_mx, int n_my, double L_x, double L_y, double mR,
                           double f_l, double f_u, double alpha_max, double gamma_max) {
  if (n_mx < 1 || n_my < 1) throw std::invalid_argument("seed_grid: mask counts must be >= 1");
  MaskSet ms;
  for (int r = 0; r < n_my; ++r)
    for (int c = 0; c < n_mx; ++c) {
      Mask m;
      m.x = L_x * (c + 0.5) / n_mx;
      m.y = L_y * (r + 0.5) / n_my;
      m.a = m.b = 0.5 * mR;
      m.theta = 0.0;
      m.alpha = 1.0;
      m.gamma = 1.0;
      ms.masks.push_back(m);
    }
  const double pi = std::acos(-1.0);
  // Centers may roam the whole domain; axes bounded by the mR factors.
  const double lo[kMaskVars] = {0.0, 0.0, f_l * mR, f_l * mR, -pi / 2, 1.0, 1.0};
  const double hi[kMaskVars] = {L_x, L_y, f_u * mR, f_u * mR, pi / 2, alpha_max, gamma_max};
  std::copy(lo, lo + kMaskVars, ms.bounds.lower);
  std::copy(hi, hi + kMaskVars, ms.bounds.upper);
  return ms;
}

void MaskSet::clip_to_bounds() {
  for (Mask& m : masks) {
    double* v[kMaskVars] = {&m.x, &m.y, &m.a, &m.b, &m.theta, &m.alpha, &m.gamma};
    for (int k = 0; k < kMaskVars; ++k)
      *v[k] = std::clamp(*v[k], bounds.lower[k], bounds.upper[k]);
  }
}

std::vector<double> density_field(const MaskSet& ms, const HexMesh& mesh) {
  std::vector<double> rho(mesh.num_elements());
  for (int i = 0; i < mesh.num_elements(); ++i) {
    const Vec2 c = mesh.element_centroid(i);
    double log_rho = 0.0;
    for (const Mask& m : ms.masks)
      log_rho += m.gamma * log_logistic(m.alpha, signed_measure(m, c));
    rho[i] = std::exp(log_rho);
  }
  return rho;
}

DensityField density_with_jacobian(const MaskSet& ms, const HexMesh& mesh, double prune_tol) {
  DensityField f;
  f.rho = density_field(ms, mesh);
  f.jac.resize(mesh.num_elements());

  for (int i = 0; i < mesh.num_elements(); ++i) {
    const Vec2 p = mesh.element_centroid(i);
    const double rho_i = f.rho[i];
    for (int j = 0; j < static_cast<int>(ms.masks.size()); ++j) {
      const Mask& m = ms.masks[j];
      const double dx = p.x() - m.x, dy = p.y() - m.y;
      const double c = std::cos(m.theta), s = std::sin(m.theta);
      const double X = c * dx + s * dy;
      const double Y = -s * dx + c * dy;
      const double d = (X / m.a) * (X / m.a) + (Y / m.b) * (Y / m.b) - 1.0;
      const double lf = logistic_density(m.alpha, d);

      // d(rho_i)/d(d_ij) = gamma alpha rho_i (1 - lf); geometric partials of d
      // follow from the rotated-frame definition.
      const double common = m.gamma * m.alpha * rho_i * (1.0 - lf);
      DensityField::Entry e;
      e.mask = j;
      const double dd_dx = 2.0 * (-(X / m.a) * (c / m.a) + (Y / m.b) * (s / m.b));
      const double dd_dy = -2.0 * ((X / m.a) * (s / m.a) + (Y / m.b) * (c / m.b));
      const double dd_da = -2.0 * X * X / (m.a * m.a * m.a);
      const double dd_db = -2.0 * Y * Y / (m.b * m.b * m.b);
      const double dd_dt = 2.0 * X * Y * (1.0 / (m.a * m.a) - 1.0 / (m.b * m.b));
      e.d[0] = common * dd_dx;
      e.d[1] = common * dd_dy;
      e.d[2] = common * dd_da;
      e.d[3] = common * dd_db;
      e.d[4] = common * dd_dt;
      e.d[5] = m.gamma * d * rho_i * (1.0 - lf);
      e.d[6] = rho_i * log_logistic(m.alpha, d);

      bool keep = false;
      for (double v : e.d)
        if (std::abs(v) > prune_tol) keep = true;
      if (keep) f.jac[i].push_back(e);
    }
  }
  return f;
}

std::string masks_to_table(const MaskSet& ms) {
  std::ostringstream os;
  os.precision(17);
  os << "# x y a b theta alpha gamma\n";
  for (const Mask& m : ms.masks)
    os << m.x << ' ' << m.y << ' ' << m.a << ' ' << m.b << ' ' << m.theta << ' '
       << m.alpha << ' ' << m.gamma << '\n';
  return os.str();
}

std::vector<Mask> masks_from_table(const std::string& text) {
  std::vector<Mask> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto pos = line.find_first_not_of(" \t");
    if (pos == std::string::npos || line[pos] == '#') continue;
    std::istringstream ls(line);
    Mask m;
    if (!(ls >> m.x >> m.y >> m.a >> m.b >> m.theta >> m.alpha >> m.gamma))
      throw std::runtime_error("masks_from_table: malformed line: " + line);
    out.push_back(m);
  }
  return out;
}

}  // namespace hexpress
