#pragma once

#include <Eigen/Core>

namespace hexpress {

/// Method of Moving Asymptotes for min f0(x) s.t. fi(x) <= 0, xmin <= x <= xmax.
///
/// Separable convex subproblems built from moving lower/upper asymptotes; the
/// subproblem is solved with a primal-dual interior point iteration driven to
/// a tight KKT residual. Asymptotes shrink by 0.7 on oscillation and grow by
/// 1.2 otherwise; moves are limited to half the variable range.
class MmaOptimizer {
public:
  struct Params {
    double asyinit = 0.5;
    double asyincr = 1.2;
    double asydecr = 0.7;
    double move = 0.5;      // move limit, fraction of (xmax - xmin)
    double albefa = 0.1;
    double raa0 = 1e-5;
    double epsimin = 1e-10;  // interior point termination
    double c = 1000.0;       // constraint penalty weight
  };

  MmaOptimizer(int n_vars, int n_cons) : MmaOptimizer(n_vars, n_cons, Params()) {}
  MmaOptimizer(int n_vars, int n_cons, Params params);

  /// One outer MMA iteration: returns the subproblem minimizer.
  /// dfdx is n_cons x n_vars. Throws on non-finite gradients (naming the
  /// offending variable).
  Eigen::VectorXd step(const Eigen::VectorXd& x, const Eigen::VectorXd& df0dx,
                       const Eigen::VectorXd& fval, const Eigen::MatrixXd& dfdx,
                       const Eigen::VectorXd& xmin, const Eigen::VectorXd& xmax);

  void reset();

private:
  int n_, m_;
  Params prm_;
  int iter_ = 0;
  Eigen::VectorXd xold1_, xold2_, low_, upp_;

  Eigen::VectorXd subsolve(const Eigen::VectorXd& alfa, const Eigen::VectorXd& beta,
                           const Eigen::VectorXd& p0, const Eigen::VectorXd& q0,
                           const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                           const Eigen::VectorXd& b) const;
};

/// The outer-loop step relaxation: psi_old + S (psi_current - psi_old).
Eigen::VectorXd relax_step(const Eigen::VectorXd& psi_old, const Eigen::VectorXd& psi_current,
                           double S);

}  // namespace hexpress
