// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "dualpress/assembly.hpp"
#include "dualpress/solve.hpp"

namespace dualpress {

// --- exact solutions and norms ---------------------------------------------

/// Closed-form fields used as error oracles. gradient fills du_a/dx_b
/// row-major (g[a*dim+b]).
struct ExactSolution {
  int dim = 2;
  std::function<void(const double* x, double* u)> displacement;
  std::function<void(const double* x, double* g)> gradient;
  std::function<double(const double* x)> pressure;
};

struct BeamParams {
  double L = 10.0;
  double l = 2.0;
  double E = 1500.0;
  double nu = 0.4999;
  double f = 3000.0;
};

/// Bending solution of the end-loaded beam:
///   u = 2f(1-nu^2)/(E l) x (l/2 - y)
///   v =  f(1-nu^2)/(E l) (x^2 + nu/(1-nu) y(y-l))
///   p = nu f (l - 2y) / l   (finite for all nu <= 1/2)
ExactSolution beam_exact(const BeamParams& params);

/// All-zero fields; compute_errors against it yields solution norms.
ExactSolution zero_solution(int dim);

struct ErrorRecord {
  double u_l2 = 0.0;
  double u_h1_semi = 0.0;
  double u_h1 = 0.0;
  double p_l2 = 0.0;
};

/// L2/H1 velocity errors by element quadrature and pressure L2 error by
/// dual-subcell quadrature. Works for both enriched and pure-Q1 dofmaps.
ErrorRecord compute_errors(const Mesh& mesh, const DualMesh& dual,
                           const DofMap& dofmap, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& p,
                           const ExactSolution& exact, int quad_points = 4);

/// FE velocity (and optionally its gradient, row-major) at a reference point.
void eval_fe_velocity(const Mesh& mesh, const DofMap& dofmap,
                      const Eigen::VectorXd& u, int elem, const double* xhat,
                      double* value, double* gradient = nullptr);

/// Point evaluation of one displacement component through the FE solution.
/// Throws if the point lies outside the mesh.
double point_displacement(const Mesh& mesh, const DofMap& dofmap,
                          const Eigen::VectorXd& u, const double* x, int comp);

/// Nodal interpolant; bubble coefficients 0, or fitted per element by local
/// L2 projection of the interpolation remainder when project_bubbles is set.
Eigen::VectorXd interpolate_velocity(
    const Mesh& mesh, const DofMap& dofmap,
    const std::function<void(const double* x, double* u)>& u,
    bool project_bubbles = false);

/// Dual-cell averages of a scalar field (the best piecewise-constant
/// approximation on the dual mesh).
Eigen::VectorXd project_pressure(const Mesh& mesh, const DualMesh& dual,
                                 const std::function<double(const double*)>& p);

// --- patch rank test --------------------------------------------------------

enum class PatchVariant {
  gradient_weighted,  // (d phi_T/d x_j) b_T e_j, dim dofs per element
  plain_bubble,       // b_T e_j, dim dofs per element
  scalar_bubble       // grad(phi_T) b_T, one dof per element
};

struct PatchRankResult {
  int n_pressures = 0;
  int n_free_velocity = 0;
  int rank = 0;
  int kernel_dim = 0;
  Eigen::VectorXd singular_values;
};

/// Assembles the divergence matrix of one 2^dim-element patch with
/// homogeneous Dirichlet data on the patch boundary and measures its rank
/// (singular values above 1e-10 of the largest) and the dimension of the
/// pressure kernel. Optional lengths/origin reshape and move the patch.
PatchRankResult patch_rank_test(int dim, PatchVariant variant,
                                const std::vector<double>& lengths = {},
                                const std::vector<double>& origin = {});

// --- numerical inf-sup test -------------------------------------------------

struct InfSupLevel {
  double h = 0.0;
  double beta = 0.0;
  int n_pressures = 0;
  int n_free_velocity = 0;
  int n_zero_modes = 0;  // 1 = constants only; more means spurious modes
};

struct InfSupReport {
  std::vector<InfSupLevel> levels;
  bool has_spurious_modes() const;
};

/// beta_h^2 = smallest nonzero eigenvalue of B G^{-1} B^T q = beta^2 C q with
/// G the H1 Gram of the Dirichlet-constrained velocity space; the constant
/// pressure mode (eigenvalue 0) is deflated. Dense eigensolve, desk scale.
InfSupReport inf_sup_test(const std::vector<Mesh>& meshes);

// --- benchmarks -------------------------------------------------------------

enum class RunMode { mixed, standard };
enum class BeamBc { dirichlet, paper };
enum class CookTip { corner, midedge };

struct ConvergenceLevel {
  int level = 0;
  int n_elems = 0;
  double h = 0.0;
  ErrorRecord err;
  double u_h1_norm = 0.0;  // discrete solution norms
  double p_l2_norm = 0.0;
  double tip = 0.0;        // Cook benchmark only
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
};

/// Rate between consecutive levels under h-halving.
inline double convergence_rate(double err_coarse, double err_fine) {
  return std::log2(err_coarse / err_fine);
}

/// Rectangular-beam benchmark on [0,L]x[0,l]; level k uses a
/// (base_nx 2^k) x (base_ny 2^k) grid. The default boundary mode imposes
/// exact-solution Dirichlet values on all of the boundary; BeamBc::paper
/// instead fixes u_x on x=0, pins u_y at (0,0) and applies the exact couple
/// traction on x=L.
ConvergenceReport run_beam(const BeamParams& params, int levels, RunMode mode,
                           BeamBc bc = BeamBc::dirichlet, double tol = 1e-10,
                           int base_nx = 4, int base_ny = 2, int threads = 1);

struct CookParams {
  double E = 250.0;
  double nu = 0.49999;
  double load = 100.0;  // total shear on the right edge
};

/// Cook membrane benchmark; level k uses n = 2^(k+1) elements per edge.
ConvergenceReport run_cook(const CookParams& params, int levels, RunMode mode,
                           CookTip tip = CookTip::corner, double tol = 1e-10,
                           int threads = 1);

/// Max element diameter (max corner-pair distance).
double max_element_diameter(const Mesh& mesh);

}  // namespace dualpress
