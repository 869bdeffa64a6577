// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <string>

#include "dualpress/assembly.hpp"

namespace dualpress {

struct SolverDiagnostics {
  int iterations = 0;
  double residual = 0.0;  // relative to the rhs norm
  std::string method;
};

enum class SolveMode { elasticity, stokes };

/// How the Stokes zero-mean pressure constraint is enforced.
enum class MeanConstraint { projection, pinned, none };

struct Solution {
  Eigen::VectorXd u;
  Eigen::VectorXd p;
  SolveMode mode = SolveMode::elasticity;
  SolverDiagnostics diag;
};

// --- sparse kernels -------------------------------------------------------

Eigen::VectorXd matvec(const SpMat& A, const Eigen::VectorXd& x);
Eigen::VectorXd transpose_matvec(const SpMat& A, const Eigen::VectorXd& x);
Eigen::VectorXd diag_scale(const Eigen::VectorXd& d, const Eigen::VectorXd& x);

/// Sparse Cholesky wrapper. factor() throws std::runtime_error with context
/// when the matrix is not SPD.
class SpdSolver {
 public:
  void factor(const SpMat& A, const std::string& context = "SpdSolver");
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  bool factored() const { return ok_; }

 private:
  Eigen::SimplicialLLT<SpMat> llt_;
  bool ok_ = false;
};

struct CgResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients. Throws std::runtime_error when
/// the iteration cap (default 10n) is exceeded.
CgResult cg_solve(const SpMat& A, const Eigen::VectorXd& b, double tol = 1e-10,
                  int max_iterations = -1, bool jacobi = true);

// --- saddle-point solvers -------------------------------------------------

/// The condensed SPD operator A + lambda B^T C^{-1} B.
SpMat condensed_operator(const SystemMatrices& system, double lambda);

enum class SpdMethod { automatic, direct, cg };

/// Statically condensed displacement solve (elasticity only): solves
/// K u = f + lambda B^T C^{-1} g with K = A + lambda B^T C^{-1} B, then
/// recovers p = lambda C^{-1} (B u - g). Requires Dirichlet applied.
Solution condense_and_solve(const SystemMatrices& system,
                            const MaterialParams& params, double tol = 1e-10,
                            SpdMethod method = SpdMethod::automatic);

/// Full saddle solve. Elasticity mode uses a sparse LU of the block matrix;
/// Stokes mode eliminates u and runs CG on the pressure Schur complement,
/// enforcing the zero C-weighted mean by kernel projection (default) or by
/// pinning one pressure dof; both end with an exact mean shift. Stokes with
/// MeanConstraint::none is reported as singular rather than regularized.
Solution solve_saddle(const SystemMatrices& system,
                      const MaterialParams& params, double tol = 1e-10,
                      MeanConstraint constraint = MeanConstraint::projection);

}  // namespace dualpress
