// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#include "dualpress/solve.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace dualpress {

Eigen::VectorXd matvec(const SpMat& A, const Eigen::VectorXd& x) {
  if (A.cols() != x.size()) {
    throw std::invalid_argument("matvec: dimension mismatch");
  }
  return A * x;
}

Eigen::VectorXd transpose_matvec(const SpMat& A, const Eigen::VectorXd& x) {
  if (A.rows() != x.size()) {
    throw std::invalid_argument("transpose_matvec: dimension mismatch");
  }
  return A.transpose() * x;
}

Eigen::VectorXd diag_scale(const Eigen::VectorXd& d, const Eigen::VectorXd& x) {
  if (d.size() != x.size()) {
    throw std::invalid_argument("diag_scale: dimension mismatch");
  }
  return d.cwiseProduct(x);
}

void SpdSolver::factor(const SpMat& A, const std::string& context) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument(context + ": matrix is not square");
  }
  llt_.compute(A);
  if (llt_.info() != Eigen::Success) {
    throw std::runtime_error(context +
                             ": Cholesky factorization failed (matrix not "
                             "symmetric positive definite)");
  }
  ok_ = true;
}

Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd& rhs) const {
  if (!ok_) throw std::runtime_error("SpdSolver::solve: not factored");
  return llt_.solve(rhs);
}

namespace {

// CG on an abstract SPD operator; optional per-iteration residual hook used
// to deflate a known kernel component.
CgResult cg_operator(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                     const Eigen::VectorXd& b, double tol, int max_iterations,
                     const Eigen::VectorXd* jacobi_diag,
                     const std::function<void(Eigen::VectorXd&)>& deflate) {
  const int n = static_cast<int>(b.size());
  if (max_iterations < 0) max_iterations = 10 * n + 100;

  CgResult res;
  res.x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = b;
  if (deflate) deflate(r);
  const double bnorm = r.norm();
  if (bnorm == 0.0) return res;

  auto precond = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    if (!jacobi_diag) return v;
    return v.cwiseQuotient(*jacobi_diag);
  };

  Eigen::VectorXd z = precond(r);
  Eigen::VectorXd d = z;
  double rz = r.dot(z);

  for (int it = 0; it < max_iterations; ++it) {
    Eigen::VectorXd Ad = apply(d);
    const double dAd = d.dot(Ad);
    if (!(dAd > 0.0)) {
      throw std::runtime_error("cg: operator is not positive definite");
    }
    const double alpha = rz / dAd;
    res.x += alpha * d;
    r -= alpha * Ad;
    if (deflate) deflate(r);
    res.iterations = it + 1;
    res.relative_residual = r.norm() / bnorm;
    if (res.relative_residual <= tol) return res;
    z = precond(r);
    const double rz_new = r.dot(z);
    d = z + (rz_new / rz) * d;
    rz = rz_new;
  }
  throw std::runtime_error(
      "cg: iteration cap exceeded (" + std::to_string(max_iterations) +
      " iterations, relative residual " +
      std::to_string(res.relative_residual) + ")");
}

}  // namespace

CgResult cg_solve(const SpMat& A, const Eigen::VectorXd& b, double tol,
                  int max_iterations, bool jacobi) {
  if (A.rows() != A.cols() || A.cols() != b.size()) {
    throw std::invalid_argument("cg_solve: dimension mismatch");
  }
  Eigen::VectorXd diag;
  if (jacobi) {
    diag = A.diagonal();
    for (int i = 0; i < diag.size(); ++i) {
      if (diag[i] <= 0.0) diag[i] = 1.0;
    }
  }
  return cg_operator([&A](const Eigen::VectorXd& v) { return A * v; }, b, tol,
                     max_iterations, jacobi ? &diag : nullptr, nullptr);
}

SpMat condensed_operator(const SystemMatrices& system, double lambda) {
  const Eigen::VectorXd cinv = system.C.cwiseInverse();
  SpMat K = system.A;
  if (lambda != 0.0) {
    SpMat Bt = system.B.transpose();
    K = system.A + lambda * (Bt * cinv.asDiagonal() * system.B);
  }
  return K;
}

Solution condense_and_solve(const SystemMatrices& system,
                            const MaterialParams& params, double tol,
                            SpdMethod method) {
  if (params.stokes) {
    throw std::invalid_argument(
        "condense_and_solve: lambda is infinite in Stokes mode; use "
        "solve_saddle");
  }
  if (!system.dirichlet_applied) {
    throw std::invalid_argument(
        "condense_and_solve: apply_dirichlet must run first");
  }
  const double lambda = params.lambda;
  const Eigen::VectorXd cinv = system.C.cwiseInverse();

  const SpMat K = condensed_operator(system, lambda);
  Eigen::VectorXd rhs = system.f;
  if (lambda != 0.0) {
    rhs += lambda * transpose_matvec(system.B, cinv.cwiseProduct(system.g));
  }

  Solution sol;
  sol.mode = SolveMode::elasticity;
  const bool direct = (method == SpdMethod::direct) ||
                      (method == SpdMethod::automatic && K.rows() <= 50000);
  if (direct) {
    SpdSolver llt;
    llt.factor(K, "condense_and_solve");
    sol.u = llt.solve(rhs);
    sol.diag.method = "llt";
  } else {
    CgResult cg = cg_solve(K, rhs, tol);
    sol.u = cg.x;
    sol.diag.method = "cg";
    sol.diag.iterations = cg.iterations;
  }
  if (lambda == 0.0) {
    sol.p = Eigen::VectorXd::Zero(system.C.size());
  } else {
    sol.p = lambda * cinv.cwiseProduct(system.B * sol.u - system.g);
  }
  const double rhs_norm = rhs.norm();
  sol.diag.residual =
      rhs_norm > 0.0 ? (rhs - K * sol.u).norm() / rhs_norm : 0.0;
  return sol;
}

namespace {

double weighted_mean(const Eigen::VectorXd& w, const Eigen::VectorXd& v) {
  return w.dot(v) / w.sum();
}

Solution solve_stokes_schur(const SystemMatrices& system, double tol,
                            MeanConstraint constraint) {
  SpdSolver allt;
  allt.factor(system.A, "solve_saddle(stokes)");
  const SpMat Bt = system.B.transpose();
  const int np = static_cast<int>(system.B.rows());

  Solution sol;
  sol.mode = SolveMode::stokes;
  sol.diag.method = constraint == MeanConstraint::pinned ? "schur-cg-pinned"
                                                         : "schur-cg-projected";

  const Eigen::VectorXd rhs_full = system.B * allt.solve(system.f) - system.g;

  if (constraint == MeanConstraint::projection) {
    auto deflate = [np](Eigen::VectorXd& r) {
      r.array() -= r.sum() / np;
    };
    auto apply = [&](const Eigen::VectorXd& q) -> Eigen::VectorXd {
      Eigen::VectorXd v = system.B * allt.solve(Bt * q);
      v.array() -= v.sum() / np;
      return v;
    };
    CgResult cg = cg_operator(apply, rhs_full, tol, 20 * np + 200, nullptr,
                              deflate);
    sol.p = cg.x;
    sol.diag.iterations = cg.iterations;
    sol.diag.residual = cg.relative_residual;
  } else {  // pinned: drop the last pressure dof, solve the reduced Schur
    const int nr = np - 1;
    auto expand = [nr, np](const Eigen::VectorXd& q) {
      Eigen::VectorXd full = Eigen::VectorXd::Zero(np);
      full.head(nr) = q;
      return full;
    };
    auto apply = [&](const Eigen::VectorXd& q) -> Eigen::VectorXd {
      const Eigen::VectorXd v = system.B * allt.solve(Bt * expand(q));
      return v.head(nr);
    };
    CgResult cg = cg_operator(apply, rhs_full.head(nr).eval(), tol,
                              20 * np + 200, nullptr, nullptr);
    sol.p = expand(cg.x);
    sol.diag.iterations = cg.iterations;
    sol.diag.residual = cg.relative_residual;
  }

  // Fix the gauge: pressures have zero C-weighted mean.
  sol.p.array() -= weighted_mean(system.C, sol.p);
  sol.u = allt.solve(system.f - Bt * sol.p);
  return sol;
}

}  // namespace

Solution solve_saddle(const SystemMatrices& system,
                      const MaterialParams& params, double tol,
                      MeanConstraint constraint) {
  if (!system.dirichlet_applied) {
    throw std::invalid_argument("solve_saddle: apply_dirichlet must run first");
  }
  const int nu = static_cast<int>(system.A.rows());
  const int np = static_cast<int>(system.B.rows());

  if (params.stokes) {
    if (constraint == MeanConstraint::none) {
      throw std::runtime_error(
          "solve_saddle: Stokes system is singular without the zero-mean "
          "pressure constraint");
    }
    return solve_stokes_schur(system, tol, constraint);
  }

  // Elasticity: direct LU of the indefinite block matrix.
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(system.A.nonZeros() + 2 * system.B.nonZeros() + np);
  for (int k = 0; k < system.A.outerSize(); ++k) {
    for (SpMat::InnerIterator it(system.A, k); it; ++it) {
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                        it.value());
    }
  }
  for (int k = 0; k < system.B.outerSize(); ++k) {
    for (SpMat::InnerIterator it(system.B, k); it; ++it) {
      trip.emplace_back(nu + static_cast<int>(it.row()),
                        static_cast<int>(it.col()), it.value());
      trip.emplace_back(static_cast<int>(it.col()),
                        nu + static_cast<int>(it.row()), it.value());
    }
  }
  for (int i = 0; i < np; ++i) {
    trip.emplace_back(nu + i, nu + i, -system.C[i] / params.lambda);
  }
  SpMat block(nu + np, nu + np);
  block.setFromTriplets(trip.begin(), trip.end());
  block.makeCompressed();

  Eigen::VectorXd rhs(nu + np);
  rhs.head(nu) = system.f;
  rhs.tail(np) = system.g;

  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(block);
  lu.factorize(block);
  if (lu.info() != Eigen::Success) {
    throw std::runtime_error(
        "solve_saddle: sparse LU factorization of the block system failed "
        "(singular saddle matrix)");
  }
  const Eigen::VectorXd x = lu.solve(rhs);

  Solution sol;
  sol.mode = SolveMode::elasticity;
  sol.u = x.head(nu);
  sol.p = x.tail(np);
  sol.diag.method = "block-lu";
  const double rhs_norm = rhs.norm();
  sol.diag.residual =
      rhs_norm > 0.0 ? (rhs - block * x).norm() / rhs_norm : 0.0;
  return sol;
}

}  // namespace dualpress
