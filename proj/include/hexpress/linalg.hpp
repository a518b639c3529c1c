#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

namespace hexpress {

using SparseMat = Eigen::SparseMatrix<double>;

/// Cholesky factorization of a symmetric system with a set of constrained
/// (Dirichlet) rows eliminated. Reusable for forward and adjoint solves that
/// share the same matrix and constraint pattern.
class ReducedSolver {
public:
  ReducedSolver(const SparseMat& A, const std::vector<int>& constrained);

  /// x on free rows solves A_ff x_f = b_f - A_fc x_c; constrained rows of x
  /// take the given values (zero if `values` is empty).
  Eigen::VectorXd solve(const Eigen::VectorXd& b,
                        const Eigen::VectorXd& values = Eigen::VectorXd()) const;

  int num_free() const { return nf_; }

private:
  int n_;
  int nf_;
  std::vector<int> free_index_;  // -1 for constrained rows
  SparseMat Afc_;                // coupling block, free rows x all columns
  Eigen::SimplicialLDLT<SparseMat> ldlt_;
};

}  // namespace hexpress
