#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <Eigen/Core>

#include "hexpress/io.hpp"
#include "hexpress/optimizer.hpp"
#include "hexpress/pipeline.hpp"
#include "hexpress/pressure.hpp"
#include "hexpress/problem.hpp"

namespace {

using namespace hexpress;

void apply_thread_cap() {
  if (const char* env = std::getenv("HEXPRESS_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }
}

void self_test_builtins() {
  for (const auto& name : builtin_names()) builtin_problem(name).validate();
}

int run_analysis(const ResolvedProblem& rp, const std::filesystem::path& out) {
  const double base = rp.spec.base_density >= 0 ? rp.spec.base_density : 0.5;
  std::vector<double> rho(rp.mesh.num_elements(), base);
  rp.apply_passive(rho);

  const SparseMat A =
      assemble_flow(rp.mesh, rho, rp.spec.pressure, rp.spec.material.thickness);
  const Eigen::VectorXd p = solve_pressure(A, rp.pressure_bc);
  const SparseMat T = assemble_transform(rp.mesh, rp.spec.material.thickness);
  const Eigen::VectorXd F = nodal_forces(T, p);

  atomic_write((out / "final.vtk").string(), vtk_string(rp.mesh, rho, p, {}, F));
  atomic_write((out / "density.svg").string(), svg_string(rp.mesh, rho));
  atomic_write((out / "log.csv").string(), csv_string({}));
  std::cout << "analysis done: max pressure " << p.maxCoeff() << " over "
            << rp.mesh.num_nodes() << " nodes\n";
  return 0;
}

int run_gradient_check(const ResolvedProblem& rp, double mask_radius) {
  MaskSet ms = MaskSet::seed_grid(rp.spec.opt.n_mx, rp.spec.opt.n_my, rp.mesh.extent_x(),
                                  rp.mesh.extent_y(), mask_radius, 0.001, 1.0,
                                  rp.spec.opt.alpha_max, rp.spec.opt.gamma_max);
  const int n = static_cast<int>(ms.masks.size()) * kMaskVars;
  const int stride = std::max(1, n / 21);
  const GradientCheck gc = check_gradients(rp, ms, 1e-6, stride);
  std::cout << "gradient check: max relative error " << gc.max_rel_error << " at variable "
            << gc.worst_variable << " (analytic " << gc.analytic << ", numeric " << gc.numeric
            << ")\n";
  return gc.max_rel_error < 1e-3 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();

  CLI::App app{"hexpress: pressure-load topology optimization on honeycomb meshes"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a builtin fixture or problem file");
  std::string problem_arg, seed_masks, out_dir;
  int iters = -1, nex = -1, ney = -1, smooth = -1;
  double step = -1.0, delta = -1.0, vstar = -1.0;
  bool freeze_alpha = false, freeze_gamma = false, do_check = false, analysis = false;
  run->add_option("problem", problem_arg, "fixture name or problem file")->required();
  run->add_option("--iters", iters, "maximum optimizer iterations");
  run->add_option("--seed-masks", seed_masks, "mask grid as NXxNY");
  run->add_option("--step", step, "relaxation step length S");
  run->add_option("--delta", delta, "grayscale constraint bound (1 disables it)");
  run->add_option("--vstar", vstar, "volume fraction limit");
  run->add_option("--smooth", smooth, "boundary smoothing passes (beta)");
  run->add_option("--nex", nex, "elements in x");
  run->add_option("--ney", ney, "elements in y");
  run->add_flag("--freeze-alpha", freeze_alpha, "hold all mask dilation variables at 1");
  run->add_flag("--freeze-gamma", freeze_gamma, "hold all mask erosion variables at 1");
  run->add_flag("--check-gradients", do_check, "verify analytic gradients against FD");
  run->add_flag("--analysis-only", analysis, "pressure analysis without optimization");
  run->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    self_test_builtins();
    ProblemSpec ps = load_problem(problem_arg);
    // Mask seeding radius at the problem's native resolution; kept fixed when
    // the mesh is coarsened for quick checks so masks stay domain-scaled.
    const double native_mR =
        ps.opt.mR_factor * (ps.L_x / ps.n_ex) / std::sqrt(3.0);
    if (iters > 0) ps.opt.max_iters = iters;
    if (nex > 0) ps.n_ex = nex;
    if (ney > 0) ps.n_ey = ney;
    if (step > 0) ps.opt.step = step;
    if (delta > 0) ps.constraints.delta = delta;
    if (vstar > 0) ps.constraints.V_star = vstar;
    if (smooth >= 0) ps.smoothing.beta = smooth;
    if (freeze_alpha) ps.opt.freeze_alpha = true;
    if (freeze_gamma) ps.opt.freeze_gamma = true;
    if (analysis) ps.analysis_only = true;
    if (!seed_masks.empty()) {
      int mx = 0, my = 0;
      if (std::sscanf(seed_masks.c_str(), "%dx%d", &mx, &my) != 2 || mx < 1 || my < 1)
        throw std::runtime_error("--seed-masks expects NXxNY, got '" + seed_masks + "'");
      ps.opt.n_mx = mx;
      ps.opt.n_my = my;
    }
    ps.validate();
    const ResolvedProblem rp = resolve(ps);

    if (do_check) return run_gradient_check(rp, native_mR);

    const std::filesystem::path out =
        out_dir.empty() ? std::filesystem::path("out_" + (ps.name.empty() ? "run" : ps.name))
                        : std::filesystem::path(out_dir);
    std::filesystem::create_directories(out);

    if (ps.analysis_only) return run_analysis(rp, out);

    const int snap_every = ps.opt.snapshot_every;
    auto on_iter = [&](const IterateRow& row, const MaskSet&, const std::vector<double>& rho) {
      std::cout << "iter " << row.iter << "  f " << row.objective << "  vol " << row.vol_frac
                << "  gsi " << row.gsi << "\n";
      if (snap_every > 0 && row.iter % snap_every == 0) {
        char name[32];
        std::snprintf(name, sizeof(name), "snap_%04d.vtk", row.iter);
        atomic_write((out / name).string(), vtk_string(rp.mesh, rho));
      }
    };

    const OptimizationResult res = run_optimization(rp, on_iter);

    const SparseMat T = assemble_transform(res.mesh, ps.material.thickness);
    const Eigen::VectorXd F = nodal_forces(T, res.p);
    atomic_write((out / "log.csv").string(), csv_string(res.log));
    atomic_write((out / "final.vtk").string(), vtk_string(res.mesh, res.rho, res.p, res.u, F));
    atomic_write((out / "density.svg").string(), svg_string(res.mesh, res.rho));
    atomic_write((out / "masks.txt").string(), masks_to_table(res.masks));
    if (!res.log.empty()) {
      const auto& last = res.log.back();
      std::cout << "final: objective " << last.objective << ", volume " << last.vol_frac
                << ", gsi " << last.gsi << (res.stagnated ? " (stagnated)" : "") << "\n";
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
