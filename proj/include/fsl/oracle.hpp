#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fsl/types.hpp"

namespace fsl::oracle {

/// Finite-difference discretization of -y'' + q(x) y(a) = lambda y on an
/// M-cell grid: second differences plus a rank-one frozen-argument term.
/// Dirichlet rows are dropped; Neumann ends use ghost-point elimination.
/// The operator is stored as tridiagonal + rank-one so shifted solves run
/// in O(M); dense() materializes the full matrix for structural checks.
struct FdMatrix {
  int dim = 0;  // M - 1 + alpha + beta
  double h = 0.0;
  // Neumann ghost elimination replaces the single neighbor coefficient
  // of the first/last row; off = {first-row value, last-row value} with
  // 0 meaning the plain -1/h^2 coupling.
  std::vector<double> off;
  std::vector<cdouble> frozen_col;  // q(x_i) per unknown row
  int frozen_index = -1;            // unknown index of a, -1 if y(a) = 0

  Eigen::MatrixXcd dense() const;
};

/// Assembles the matrix.  The frozen point a must be a grid node.
FdMatrix fd_matrix(const Potential& q, const BvpConfig& config, int M);

/// For each target, shifted inverse iteration from z = target + offset;
/// returns the converged eigenvalue nearest the shift.  Solves use the
/// Thomas algorithm plus a Sherman-Morrison correction for the rank-one
/// term.  Throws convergence_error per failed target.
std::vector<cdouble> fd_eigenvalues_near(const FdMatrix& matrix,
                                         const std::vector<cdouble>& targets,
                                         double tol = 1e-10);

}  // namespace fsl::oracle
