#include "hexpress/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <filesystem>

namespace hexpress {

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    f << content;
    if (!f.flush()) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string vtk_string(const HexMesh& mesh, const std::vector<double>& rho,
                       const Eigen::VectorXd& p, const Eigen::VectorXd& u,
                       const Eigen::VectorXd& force) {
  const int nn = mesh.num_nodes(), ne = mesh.num_elements();
  if (static_cast<int>(rho.size()) != ne)
    throw std::invalid_argument("vtk_string: density size mismatch");

  std::ostringstream o;
  o.precision(9);
  o << "# vtk DataFile Version 3.0\nhexpress result\nASCII\nDATASET POLYDATA\n";
  o << "POINTS " << nn << " double\n";
  for (const auto& nd : mesh.nodes()) o << nd.x() << " " << nd.y() << " 0\n";
  o << "POLYGONS " << ne << " " << 7 * ne << "\n";
  for (const auto& el : mesh.elements()) {
    o << "6";
    for (int n : el) o << " " << n;
    o << "\n";
  }

  o << "CELL_DATA " << ne << "\nSCALARS density double 1\nLOOKUP_TABLE default\n";
  for (double r : rho) o << r << "\n";

  const bool has_p = p.size() == nn;
  const bool has_u = u.size() == 2 * nn;
  const bool has_f = force.size() == 2 * nn;
  if (has_p || has_u || has_f) o << "POINT_DATA " << nn << "\n";
  if (has_p) {
    o << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < nn; ++i) o << p[i] << "\n";
  }
  if (has_u) {
    o << "VECTORS displacement double\n";
    for (int i = 0; i < nn; ++i) o << u[2 * i] << " " << u[2 * i + 1] << " 0\n";
  }
  if (has_f) {
    o << "VECTORS pressure_force double\n";
    for (int i = 0; i < nn; ++i) o << force[2 * i] << " " << force[2 * i + 1] << " 0\n";
  }
  return o.str();
}

std::string svg_string(const HexMesh& mesh, const std::vector<double>& rho, double width_px) {
  if (static_cast<int>(rho.size()) != mesh.num_elements())
    throw std::invalid_argument("svg_string: density size mismatch");
  const double sx = width_px / mesh.extent_x();
  const double h_px = sx * mesh.extent_y();

  std::ostringstream o;
  o.precision(4);
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width_px << "\" height=\""
    << h_px << "\" viewBox=\"0 0 " << width_px << " " << h_px << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int i = 0; i < mesh.num_elements(); ++i) {
    const double g = std::clamp(rho[i], 0.0, 1.0);
    const int shade = static_cast<int>(std::lround(255.0 * (1.0 - g)));
    o << "<polygon points=\"";
    for (const Vec2& v : mesh.element_coords(i))
      o << v.x() * sx << "," << h_px - v.y() * sx << " ";
    o << "\" fill=\"rgb(" << shade << "," << shade << "," << shade << ")\" stroke=\"none\"/>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string csv_string(const std::vector<IterateRow>& log) {
  std::ostringstream o;
  o.precision(12);
  o << "iter,objective,vol_frac,gsi,g1,g2\n";
  for (const auto& r : log)
    o << r.iter << "," << r.objective << "," << r.vol_frac << "," << r.gsi << "," << r.g1 << ","
      << r.g2 << "\n";
  return o.str();
}

}  // namespace hexpress
