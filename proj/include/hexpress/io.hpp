#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "hexpress/mesh.hpp"
#include "hexpress/optimizer.hpp"

namespace hexpress {

/// Writes content to path atomically (temp file in the same directory,
/// then rename).
void atomic_write(const std::string& path, const std::string& content);

/// Legacy ASCII VTK: polygon cells with cell data "density"; point data
/// "pressure" plus vector fields "displacement" (and "pressure_force" when
/// given). Empty vectors skip the corresponding arrays.
std::string vtk_string(const HexMesh& mesh, const std::vector<double>& rho,
                       const Eigen::VectorXd& p = {}, const Eigen::VectorXd& u = {},
                       const Eigen::VectorXd& force = {});

/// Grayscale density plot, one filled hexagon per element; 0 = white,
/// 1 = black.
std::string svg_string(const HexMesh& mesh, const std::vector<double>& rho,
                       double width_px = 800.0);

/// `iter,objective,vol_frac,gsi,g1,g2` rows with header.
std::string csv_string(const std::vector<IterateRow>& log);

}  // namespace hexpress
