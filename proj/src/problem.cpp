#include "hexpress/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace hexpress {
namespace {

constexpr double kPi = 3.14159265358979323846;

Side parse_side(const std::string& tok, int line) {
  if (tok == "bottom") return Side::Bottom;
  if (tok == "top") return Side::Top;
  if (tok == "left") return Side::Left;
  if (tok == "right") return Side::Right;
  throw std::runtime_error("problem file line " + std::to_string(line) +
                           ": unknown side '" + tok + "'");
}

const char* side_name(Side s) {
  switch (s) {
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
    case Side::Left: return "left";
    default: return "right";
  }
}

/// Side classification of one boundary edge by outward normal and position.
Side classify(const HexMesh& mesh, const BoundaryEdge& be) {
  const auto& el = mesh.elements()[be.element];
  const Vec2 p0 = mesh.nodes()[el[be.local_edge]];
  const Vec2 p1 = mesh.nodes()[el[(be.local_edge + 1) % 6]];
  const Vec2 mid = 0.5 * (p0 + p1);
  if (std::abs(be.normal.x()) > 0.9) return be.normal.x() < 0 ? Side::Left : Side::Right;
  const double band = 1.1 * mesh.edge_length();
  if (be.normal.y() < 0 && mid.y() < band) return Side::Bottom;
  if (be.normal.y() > 0 && mid.y() > mesh.extent_y() - band) return Side::Top;
  // Staircase edge on a shifted row end: slanted normal but mid-domain height.
  return be.normal.x() < 0 ? Side::Left : Side::Right;
}

/// Nodes on the given span of a domain side.
std::vector<int> select_nodes(const HexMesh& mesh, const EdgeSelector& sel) {
  std::vector<int> out;
  const double tol = 1e-9;
  for (const auto& be : mesh.boundary_edges()) {
    if (classify(mesh, be) != sel.side) continue;
    const auto& el = mesh.elements()[be.element];
    const int n0 = el[be.local_edge];
    const int n1 = el[(be.local_edge + 1) % 6];
    const Vec2 mid = 0.5 * (mesh.nodes()[n0] + mesh.nodes()[n1]);
    const double t = (sel.side == Side::Bottom || sel.side == Side::Top)
                         ? mid.x() / mesh.extent_x()
                         : mid.y() / mesh.extent_y();
    if (t < sel.t0 - tol || t > sel.t1 + tol) continue;
    out.push_back(n0);
    out.push_back(n1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

void ProblemSpec::validate() const {
  if (n_ex < 1 || n_ey < 1) throw std::invalid_argument("problem: mesh dims must be >= 1");
  if (L_x <= 0 || L_y <= 0) throw std::invalid_argument("problem: domain extents must be > 0");
  material.validate();
  {
    // delta_s may still be unset here; it defaults from the cell size.
    PressureModelParams pm = pressure;
    pm.resolve_penetration_depth(L_x / n_ex);
    pm.validate();
  }
  if (pressure_edges.empty())
    throw std::invalid_argument("problem: at least one pressure inlet edge is required");
  if (analysis_only) {
    if (base_density >= 0 && (base_density < 0.0 || base_density > 1.0))
      throw std::invalid_argument("problem: base density must lie in [0,1]");
    return;
  }
  if (constraints.V_star <= 0 || constraints.V_star > 1)
    throw std::invalid_argument("problem: volume fraction limit must lie in (0,1]");
  if (constraints.delta <= 0) throw std::invalid_argument("problem: grayscale bound must be > 0");
  if (opt.max_iters < 1) throw std::invalid_argument("problem: iteration count must be >= 1");
  if (opt.step <= 0 || opt.step > 1)
    throw std::invalid_argument("problem: step relaxation must lie in (0,1]");
  if (opt.n_mx < 1 || opt.n_my < 1) throw std::invalid_argument("problem: mask grid must be >= 1");
  if (opt.alpha_max < 1 || opt.gamma_max < 1)
    throw std::invalid_argument("problem: alpha/gamma upper bounds must be >= 1");
  if (opt.mR_factor <= 0) throw std::invalid_argument("problem: mask radius factor must be > 0");
  if (opt.mma_c <= 0) throw std::invalid_argument("problem: MMA penalty weight must be > 0");
  if (smoothing.beta < 0) throw std::invalid_argument("problem: smoothing passes must be >= 0");
  if (fixes.empty()) throw std::invalid_argument("problem: structure needs fixed dofs");
  if (objective == ObjectiveKind::Multicriteria && !output)
    throw std::invalid_argument("problem: mechanism objective needs an output spring");
}

ObjectiveSpec ResolvedProblem::objective_spec() const {
  ObjectiveSpec os;
  os.kind = spec.objective;
  os.chi = spec.chi;
  os.dummy_dof = dummy_dof;
  return os;
}

void ResolvedProblem::apply_passive(std::vector<double>& rho) const {
  for (const auto& [e, val] : passive_elements) rho.at(e) = val;
}

void ResolvedProblem::apply_passive(DensityField& field) const {
  for (const auto& [e, val] : passive_elements) {
    field.rho.at(e) = val;
    field.jac.at(e).clear();
  }
}

ResolvedProblem resolve(const ProblemSpec& spec) {
  spec.validate();
  ResolvedProblem rp;
  rp.spec = spec;
  rp.spec.pressure.resolve_penetration_depth(spec.L_x / spec.n_ex);
  rp.mesh = HexMesh::generate(spec.n_ex, spec.n_ey, spec.L_x, spec.L_y);

  for (const auto& fx : spec.fixes) {
    for (int n : select_nodes(rp.mesh, fx.edge)) {
      if (fx.fix_x) rp.fixed_dofs.push_back(2 * n);
      if (fx.fix_y) rp.fixed_dofs.push_back(2 * n + 1);
    }
  }
  std::sort(rp.fixed_dofs.begin(), rp.fixed_dofs.end());
  rp.fixed_dofs.erase(std::unique(rp.fixed_dofs.begin(), rp.fixed_dofs.end()),
                      rp.fixed_dofs.end());

  for (const auto& sel : spec.zero_pressure_edges)
    for (int n : select_nodes(rp.mesh, sel)) rp.pressure_bc[n] = 0.0;
  for (const auto& sel : spec.pressure_edges)
    for (int n : select_nodes(rp.mesh, sel)) rp.pressure_bc[n] = spec.pressure.p_in;
  if (rp.pressure_bc.empty())
    throw std::runtime_error("problem '" + spec.name + "': pressure edges select no nodes");

  for (const auto& pr : spec.passive) {
    const double x0 = pr.x0 * rp.mesh.extent_x(), x1 = pr.x1 * rp.mesh.extent_x();
    const double y0 = pr.y0 * rp.mesh.extent_y(), y1 = pr.y1 * rp.mesh.extent_y();
    for (int i = 0; i < rp.mesh.num_elements(); ++i) {
      const Vec2 c = rp.mesh.element_centroid(i);
      if (c.x() >= x0 && c.x() <= x1 && c.y() >= y0 && c.y() <= y1)
        rp.passive_elements.emplace_back(i, pr.solid ? 1.0 : 0.0);
    }
  }

  if (spec.output) {
    const Vec2 target(spec.output->x * rp.mesh.extent_x(), spec.output->y * rp.mesh.extent_y());
    int best = 0;
    double best_d = std::numeric_limits<double>::max();
    for (int n = 0; n < rp.mesh.num_nodes(); ++n) {
      const double d = (rp.mesh.nodes()[n] - target).squaredNorm();
      if (d < best_d) {
        best_d = d;
        best = n;
      }
    }
    const bool vertical = std::abs(spec.output->dy) > std::abs(spec.output->dx);
    rp.dummy_dof = 2 * best + (vertical ? 1 : 0);
    rp.dummy_sign = (vertical ? spec.output->dy : spec.output->dx) < 0 ? -1.0 : 1.0;
    rp.springs.push_back({rp.dummy_dof, spec.output->stiffness});
  }
  return rp;
}

std::vector<std::string> builtin_names() {
  return {"ddomain1", "ddomain2", "arch", "piston", "inverter", "gripper"};
}

bool is_builtin(const std::string& name) {
  auto names = builtin_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

ProblemSpec builtin_problem(const std::string& name) {
  ProblemSpec ps;
  ps.name = name;
  if (name == "ddomain1" || name == "ddomain2") {
    ps.n_ex = 80;
    ps.n_ey = 60;
    ps.L_x = 0.2 * std::cos(kPi / 6.0);
    ps.L_y = 0.2 * std::sin(kPi / 6.0);
    ps.analysis_only = true;
    ps.base_density = 0.01;
    ps.pressure_edges = {{Side::Bottom, 0, 1}};
    if (name == "ddomain1") {
      ps.zero_pressure_edges = {{Side::Top, 0, 1}, {Side::Left, 0, 1}, {Side::Right, 0, 1}};
    } else {
      ps.zero_pressure_edges = {{Side::Top, 0, 1}};
      // Two full-width solid strips, one tenth of the height thick and two
      // tenths apart.
      ps.passive = {{0, 0.4, 1, 0.5, true}, {0, 0.7, 1, 0.8, true}};
    }
    return ps;
  }
  if (name == "arch") {
    ps.n_ex = 200;
    ps.n_ey = 100;
    ps.L_x = 0.2;
    ps.L_y = 0.1;
    ps.objective = ObjectiveKind::Compliance;
    ps.constraints.V_star = 0.20;
    ps.constraints.delta = 0.003;
    ps.fixes = {{{Side::Bottom, 0.0, 0.05}, true, true},
                {{Side::Bottom, 0.95, 1.0}, true, true}};
    ps.pressure_edges = {{Side::Bottom, 0, 1}};
    ps.zero_pressure_edges = {{Side::Top, 0, 1}};
    ps.opt.max_iters = 500;
    ps.opt.step = 0.03;
    ps.opt.n_mx = 20;
    ps.opt.n_my = 10;
    // The tight grayscale bound needs a stiffer constraint penalty than the
    // library default to end feasible instead of oscillating just above it.
    ps.opt.mma_c = 30.0;
    return ps;
  }
  if (name == "piston") {
    // Symmetric half of the 0.12 x 0.04 domain; the right edge is the
    // symmetry line.
    ps.n_ex = 120;
    ps.n_ey = 80;
    ps.L_x = 0.06;
    ps.L_y = 0.04;
    ps.symmetry = true;
    ps.objective = ObjectiveKind::Compliance;
    ps.constraints.V_star = 0.30;
    ps.constraints.delta = 0.003;
    ps.fixes = {{{Side::Left, 0.0, 0.25}, true, true},
                {{Side::Right, 0.0, 1.0}, true, false}};
    ps.pressure_edges = {{Side::Top, 0, 1}};
    ps.zero_pressure_edges = {{Side::Bottom, 0, 1}};
    ps.pressure.beta_K = ps.pressure.beta_D = 12.0;
    ps.pressure.eta_K = ps.pressure.eta_D = 0.25;
    ps.opt.max_iters = 500;
    ps.opt.step = 0.025;
    ps.opt.n_mx = 10;
    ps.opt.n_my = 10;
    ps.opt.alpha_max = 40.0;
    ps.opt.gamma_max = 20.0;
    return ps;
  }
  if (name == "inverter" || name == "gripper") {
    // Symmetric halves; the bottom edge is the symmetry line.
    ps.n_ex = 200;
    ps.n_ey = 100;
    ps.L_x = 0.2;
    ps.L_y = 0.1;
    ps.symmetry = true;
    ps.objective = ObjectiveKind::Multicriteria;
    ps.chi = 1.0;
    ps.constraints.delta = 0.005;
    ps.fixes = {{{Side::Bottom, 0.0, 1.0}, false, true},
                {{Side::Left, 0.9, 1.0}, true, true},
                {{Side::Top, 0.0, 0.05}, true, true}};
    ps.pressure_edges = {{Side::Left, 0.0, 0.4}};
    ps.zero_pressure_edges = {{Side::Top, 0, 1}, {Side::Right, 0, 1}};
    ps.pressure.eta_K = ps.pressure.eta_D = 0.25;
    ps.opt.max_iters = 600;
    ps.opt.step = 0.01;
    if (name == "inverter") {
      ps.constraints.V_star = 0.20;
      ps.pressure.beta_K = ps.pressure.beta_D = 12.0;
      ps.opt.n_mx = 20;
      ps.opt.n_my = 10;
      ps.opt.alpha_max = 60.0;
      ps.opt.gamma_max = 50.0;
      ps.output = OutputSpring{1.0, 0.0, -1.0, 0.0, 1e4};
    } else {
      ps.constraints.V_star = 0.25;
      ps.pressure.beta_K = ps.pressure.beta_D = 10.0;
      ps.opt.n_mx = 12;
      ps.opt.n_my = 12;
      ps.opt.alpha_max = 60.0;
      ps.opt.gamma_max = 20.0;
      ps.fixes.push_back({{Side::Right, 0.7, 1.0}, true, true});
      // Workpiece seat (void) on the symmetry line with a solid jaw above it.
      ps.passive = {{0.85, 0.0, 0.95, 0.2, false}, {0.85, 0.2, 0.95, 0.25, true}};
      ps.output = OutputSpring{0.90, 0.25, 0.0, -1.0, 5e4};
    }
    return ps;
  }
  throw std::invalid_argument("unknown builtin problem '" + name + "'");
}

ProblemSpec parse_problem(const std::string& text) {
  ProblemSpec ps;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw std::runtime_error("problem file line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos) fail("expected 'key = value'");
    std::istringstream ks(line.substr(0, eq));
    std::string key;
    ks >> key;
    std::string extra;
    if (ks >> extra) fail("malformed key");
    std::istringstream vs(line.substr(eq + 1));

    auto num = [&]() {
      double v;
      if (!(vs >> v)) fail("expected a number for '" + key + "'");
      return v;
    };
    auto word = [&]() {
      std::string w;
      if (!(vs >> w)) fail("expected a word for '" + key + "'");
      return w;
    };
    auto edge = [&]() {
      EdgeSelector sel;
      sel.side = parse_side(word(), lineno);
      sel.t0 = num();
      sel.t1 = num();
      return sel;
    };

    if (key == "name") ps.name = word();
    else if (key == "nex") ps.n_ex = static_cast<int>(num());
    else if (key == "ney") ps.n_ey = static_cast<int>(num());
    else if (key == "lx") ps.L_x = num();
    else if (key == "ly") ps.L_y = num();
    else if (key == "objective") {
      const std::string w = word();
      if (w == "compliance") ps.objective = ObjectiveKind::Compliance;
      else if (w == "multicriteria") ps.objective = ObjectiveKind::Multicriteria;
      else fail("objective must be 'compliance' or 'multicriteria'");
    } else if (key == "chi") ps.chi = num();
    else if (key == "vstar") ps.constraints.V_star = num();
    else if (key == "delta") ps.constraints.delta = num();
    else if (key == "fix") {
      FixSelector fx;
      fx.edge = edge();
      const std::string d = word();
      fx.fix_x = d.find('x') != std::string::npos;
      fx.fix_y = d.find('y') != std::string::npos;
      if (!fx.fix_x && !fx.fix_y) fail("fix dofs must contain 'x' and/or 'y'");
      ps.fixes.push_back(fx);
    } else if (key == "pressure") ps.pressure_edges.push_back(edge());
    else if (key == "zero_pressure") ps.zero_pressure_edges.push_back(edge());
    else if (key == "passive_solid" || key == "passive_void") {
      PassiveRegion pr;
      pr.x0 = num();
      pr.y0 = num();
      pr.x1 = num();
      pr.y1 = num();
      pr.solid = key == "passive_solid";
      ps.passive.push_back(pr);
    } else if (key == "output") {
      OutputSpring os;
      os.x = num();
      os.y = num();
      os.dx = num();
      os.dy = num();
      os.stiffness = num();
      ps.output = os;
    } else if (key == "e1") ps.material.E1 = num();
    else if (key == "emin") ps.material.E_min = num();
    else if (key == "zeta") ps.material.zeta = num();
    else if (key == "nu") ps.material.nu = num();
    else if (key == "thickness") ps.material.thickness = num();
    else if (key == "p_in") ps.pressure.p_in = num();
    else if (key == "kv") ps.pressure.K_V = num();
    else if (key == "ks") ps.pressure.K_S = num();
    else if (key == "eta_k") ps.pressure.eta_K = num();
    else if (key == "beta_k") ps.pressure.beta_K = num();
    else if (key == "eta_d") ps.pressure.eta_D = num();
    else if (key == "beta_d") ps.pressure.beta_D = num();
    else if (key == "r") ps.pressure.r = num();
    else if (key == "delta_s") ps.pressure.delta_s = num();
    else if (key == "iters") ps.opt.max_iters = static_cast<int>(num());
    else if (key == "step") ps.opt.step = num();
    else if (key == "nmx") ps.opt.n_mx = static_cast<int>(num());
    else if (key == "nmy") ps.opt.n_my = static_cast<int>(num());
    else if (key == "alpha_max") ps.opt.alpha_max = num();
    else if (key == "gamma_max") ps.opt.gamma_max = num();
    else if (key == "freeze_alpha") ps.opt.freeze_alpha = num() != 0;
    else if (key == "freeze_gamma") ps.opt.freeze_gamma = num() != 0;
    else if (key == "mr_factor") ps.opt.mR_factor = num();
    else if (key == "mma_c") ps.opt.mma_c = num();
    else if (key == "snapshot_every") ps.opt.snapshot_every = static_cast<int>(num());
    else if (key == "smooth_beta") ps.smoothing.beta = static_cast<int>(num());
    else if (key == "smooth_threshold") ps.smoothing.threshold = num();
    else if (key == "smooth_each_iteration") ps.smooth_each_iteration = num() != 0;
    else if (key == "symmetry") ps.symmetry = num() != 0;
    else if (key == "analysis_only") ps.analysis_only = num() != 0;
    else if (key == "base_density") ps.base_density = num();
    else fail("unknown key '" + key + "'");

    std::string trailing;
    if (vs >> trailing) fail("trailing tokens after value for '" + key + "'");
  }
  ps.validate();
  return ps;
}

ProblemSpec load_problem(const std::string& path_or_builtin) {
  if (is_builtin(path_or_builtin)) return builtin_problem(path_or_builtin);
  std::ifstream f(path_or_builtin);
  if (!f) throw std::runtime_error("cannot open problem file '" + path_or_builtin + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_problem(ss.str());
}

std::string save_problem(const ProblemSpec& ps) {
  std::ostringstream o;
  o.precision(17);
  o << "name = " << (ps.name.empty() ? "unnamed" : ps.name) << "\n";
  o << "nex = " << ps.n_ex << "\nney = " << ps.n_ey << "\n";
  o << "lx = " << ps.L_x << "\nly = " << ps.L_y << "\n";
  o << "objective = "
    << (ps.objective == ObjectiveKind::Compliance ? "compliance" : "multicriteria") << "\n";
  o << "chi = " << ps.chi << "\n";
  o << "vstar = " << ps.constraints.V_star << "\ndelta = " << ps.constraints.delta << "\n";
  for (const auto& fx : ps.fixes) {
    o << "fix = " << side_name(fx.edge.side) << " " << fx.edge.t0 << " " << fx.edge.t1 << " ";
    if (fx.fix_x) o << "x";
    if (fx.fix_y) o << "y";
    o << "\n";
  }
  for (const auto& e : ps.pressure_edges)
    o << "pressure = " << side_name(e.side) << " " << e.t0 << " " << e.t1 << "\n";
  for (const auto& e : ps.zero_pressure_edges)
    o << "zero_pressure = " << side_name(e.side) << " " << e.t0 << " " << e.t1 << "\n";
  for (const auto& pr : ps.passive)
    o << (pr.solid ? "passive_solid = " : "passive_void = ") << pr.x0 << " " << pr.y0 << " "
      << pr.x1 << " " << pr.y1 << "\n";
  if (ps.output)
    o << "output = " << ps.output->x << " " << ps.output->y << " " << ps.output->dx << " "
      << ps.output->dy << " " << ps.output->stiffness << "\n";
  o << "e1 = " << ps.material.E1 << "\nemin = " << ps.material.E_min << "\n";
  o << "zeta = " << ps.material.zeta << "\nnu = " << ps.material.nu << "\n";
  o << "thickness = " << ps.material.thickness << "\n";
  o << "p_in = " << ps.pressure.p_in << "\nkv = " << ps.pressure.K_V << "\nks = "
    << ps.pressure.K_S << "\n";
  o << "eta_k = " << ps.pressure.eta_K << "\nbeta_k = " << ps.pressure.beta_K << "\n";
  o << "eta_d = " << ps.pressure.eta_D << "\nbeta_d = " << ps.pressure.beta_D << "\n";
  o << "r = " << ps.pressure.r << "\ndelta_s = " << ps.pressure.delta_s << "\n";
  o << "iters = " << ps.opt.max_iters << "\nstep = " << ps.opt.step << "\n";
  o << "nmx = " << ps.opt.n_mx << "\nnmy = " << ps.opt.n_my << "\n";
  o << "alpha_max = " << ps.opt.alpha_max << "\ngamma_max = " << ps.opt.gamma_max << "\n";
  o << "freeze_alpha = " << (ps.opt.freeze_alpha ? 1 : 0) << "\n";
  o << "freeze_gamma = " << (ps.opt.freeze_gamma ? 1 : 0) << "\n";
  o << "mr_factor = " << ps.opt.mR_factor << "\n";
  o << "mma_c = " << ps.opt.mma_c << "\n";
  o << "snapshot_every = " << ps.opt.snapshot_every << "\n";
  o << "smooth_beta = " << ps.smoothing.beta << "\n";
  o << "smooth_threshold = " << ps.smoothing.threshold << "\n";
  o << "smooth_each_iteration = " << (ps.smooth_each_iteration ? 1 : 0) << "\n";
  o << "symmetry = " << (ps.symmetry ? 1 : 0) << "\n";
  o << "analysis_only = " << (ps.analysis_only ? 1 : 0) << "\n";
  o << "base_density = " << ps.base_density << "\n";
  return o.str();
}

}  // namespace hexpress
