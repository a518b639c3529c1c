#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hexpress/adjoint.hpp"
#include "hexpress/fem.hpp"
#include "hexpress/mesh.hpp"
#include "hexpress/pressure.hpp"
#include "hexpress/smoothing.hpp"

namespace hexpress {

enum class Side { Bottom, Top, Left, Right };

/// Span of one domain side, parameterized 0..1 along it.
struct EdgeSelector {
  Side side;
  double t0 = 0.0, t1 = 1.0;
};

struct FixSelector {
  EdgeSelector edge;
  bool fix_x = true, fix_y = true;
};

/// Axis-aligned density override. Coordinates are fractions of the meshed
/// extents, resolved against the generated mesh.
struct PassiveRegion {
  double x0, y0, x1, y1;
  bool solid;  // true: rho = 1, false: rho = 0
};

struct OutputSpring {
  double x, y;       // fractions of the meshed extents; snapped to nearest node
  double dx, dy;     // output direction (one axis)
  double stiffness;  // [N/m]
};

struct OptimizerConfig {
  int max_iters = 100;
  double step = 0.05;  // relaxation S
  int n_mx = 10, n_my = 5;
  double alpha_max = 30.0, gamma_max = 30.0;
  bool freeze_alpha = false, freeze_gamma = false;
  double mR_factor = 30.0;  // mask radius parameter, in element edge lengths
  // Penalty weight on constraint violation inside the MMA subproblem. Kept
  // deliberately mild: the grayscale constraint must be allowed to go
  // infeasible mid-run (material growth passes through gray designs) and
  // recover; a heavy penalty traps the run near the void seed.
  double mma_c = 10.0;
  int snapshot_every = 0;
  double stagnation_tol = 1e-8;
  int stagnation_iters = 20;
};

struct ProblemSpec {
  std::string name;

  int n_ex = 10, n_ey = 10;
  double L_x = 1.0, L_y = 1.0;

  std::vector<FixSelector> fixes;
  std::vector<EdgeSelector> pressure_edges;       // Dirichlet at p_in
  std::vector<EdgeSelector> zero_pressure_edges;  // Dirichlet at 0
  std::vector<PassiveRegion> passive;
  std::optional<OutputSpring> output;

  ObjectiveKind objective = ObjectiveKind::Compliance;
  double chi = 1.0;
  ConstraintSpec constraints;
  PressureModelParams pressure;
  MaterialParams material;
  OptimizerConfig opt;
  SmoothingConfig smoothing;
  bool smooth_each_iteration = true;
  bool symmetry = false;

  bool analysis_only = false;
  double base_density = -1.0;  // >= 0: uniform analysis density (no masks)

  void validate() const;
};

/// Mesh plus all selectors resolved to node/dof/element indices.
struct ResolvedProblem {
  ProblemSpec spec;
  HexMesh mesh;
  std::vector<int> fixed_dofs;
  std::map<int, double> pressure_bc;           // node -> prescribed pressure
  std::vector<PointSpring> springs;
  int dummy_dof = -1;
  double dummy_sign = 1.0;
  std::vector<std::pair<int, double>> passive_elements;  // element -> density

  ObjectiveSpec objective_spec() const;

  /// Applies passive overrides to a density vector (and optionally zeroes the
  /// corresponding Jacobian rows).
  void apply_passive(std::vector<double>& rho) const;
  void apply_passive(DensityField& field) const;
};

ResolvedProblem resolve(const ProblemSpec& spec);

/// Builtin fixture names: ddomain1, ddomain2, arch, piston, inverter, gripper.
std::vector<std::string> builtin_names();
bool is_builtin(const std::string& name);
ProblemSpec builtin_problem(const std::string& name);

/// Plain-text `key = value` problem files; unknown keys are errors with line
/// numbers. Table-1 defaults apply to every omitted key.
ProblemSpec parse_problem(const std::string& text);
ProblemSpec load_problem(const std::string& path_or_builtin);
std::string save_problem(const ProblemSpec& spec);

}  // namespace hexpress
