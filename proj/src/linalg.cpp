#include "hexpress/linalg.hpp"

#include <stdexcept>

namespace hexpress {

ReducedSolver::ReducedSolver(const SparseMat& A, const std::vector<int>& constrained)
    : n_(static_cast<int>(A.rows())), nf_(0), free_index_(n_, 0) {
  for (int d : constrained) {
    if (d < 0 || d >= n_) throw std::out_of_range("ReducedSolver: constrained row out of range");
    free_index_[d] = -1;
  }
  for (int i = 0; i < n_; ++i)
    if (free_index_[i] != -1) free_index_[i] = nf_++;

  std::vector<Eigen::Triplet<double>> ff, fc;
  for (int c = 0; c < A.outerSize(); ++c)
    for (SparseMat::InnerIterator it(A, c); it; ++it) {
      const int fr = free_index_[it.row()];
      if (fr < 0) continue;
      if (free_index_[it.col()] >= 0)
        ff.emplace_back(fr, free_index_[it.col()], it.value());
      else
        fc.emplace_back(fr, it.col(), it.value());
    }
  SparseMat Aff(nf_, nf_);
  Aff.setFromTriplets(ff.begin(), ff.end());
  Afc_.resize(nf_, n_);
  Afc_.setFromTriplets(fc.begin(), fc.end());

  ldlt_.compute(Aff);
  if (ldlt_.info() != Eigen::Success)
    throw std::runtime_error("ReducedSolver: factorization failed (singular or indefinite)");
  if (nf_ > 0) {
    const Eigen::VectorXd d = ldlt_.vectorD();
    const double dmax = d.cwiseAbs().maxCoeff();
    if (!(d.minCoeff() > 1e-12 * dmax))
      throw std::runtime_error("ReducedSolver: factorization failed (singular or indefinite)");
  }
}

Eigen::VectorXd ReducedSolver::solve(const Eigen::VectorXd& b,
                                     const Eigen::VectorXd& values) const {
  if (b.size() != n_) throw std::invalid_argument("ReducedSolver::solve: size mismatch");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
  if (values.size() > 0) {
    if (values.size() != n_)
      throw std::invalid_argument("ReducedSolver::solve: values size mismatch");
    for (int i = 0; i < n_; ++i)
      if (free_index_[i] < 0) x[i] = values[i];
  }

  Eigen::VectorXd bf(nf_);
  for (int i = 0; i < n_; ++i)
    if (free_index_[i] >= 0) bf[free_index_[i]] = b[i];
  if (values.size() > 0) bf -= Afc_ * x;

  Eigen::VectorXd xf = ldlt_.solve(bf);
  if (!xf.allFinite())
    throw std::runtime_error("ReducedSolver::solve: non-finite solution (singular system)");
  for (int i = 0; i < n_; ++i)
    if (free_index_[i] >= 0) x[i] = xf[free_index_[i]];
  return x;
}

}  // namespace hexpress
