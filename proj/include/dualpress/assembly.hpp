// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <map>
#include <string>

#include "dualpress/fespace.hpp"
#include "dualpress/mesh.hpp"

namespace dualpress {

using SpMat = Eigen::SparseMatrix<double>;

/// Isotropic material. In Stokes mode lambda is treated as infinite and
/// gamma = 2*mu acts as the kinematic viscosity.
struct MaterialParams {
  double E = 0.0;
  double nu = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  bool stokes = false;

  double gamma() const { return 2.0 * mu; }
};

/// Plane-strain / 3D Lame parameters. Rejects nu >= 0.5 (use stokes_params).
MaterialParams lame_from_E_nu(double E, double nu);

/// Stokes-limit material with kinematic viscosity gamma = 2*mu.
MaterialParams stokes_params(double gamma);

/// Position-dependent traction on the facets carrying one tag.
using TractionFn = std::function<void(const double* x, double* t)>;
using BodyForceFn = std::function<void(const double* x, double* f)>;

/// Matrices and vectors of the discrete saddle system
///   [ A   B^T ] [u]   [f]
///   [ B  -C/l ] [p] = [g]
/// (g is zero until nonhomogeneous Dirichlet data is eliminated).
struct SystemMatrices {
  SpMat A;            // velocity x velocity
  SpMat B;            // pressure x velocity
  Eigen::VectorXd C;  // diagonal dual-cell volumes
  Eigen::VectorXd f;  // velocity load
  Eigen::VectorXd g;  // pressure-equation rhs
  bool dirichlet_applied = false;
};

SpMat assemble_A(const Mesh& mesh, const DofMap& dofmap,
                 const MaterialParams& params,
                 EnrichmentVariant variant = EnrichmentVariant::gradient_weighted,
                 int quad_points = 3);

SpMat assemble_B(const Mesh& mesh, const DualMesh& dual, const DofMap& dofmap,
                 EnrichmentVariant variant = EnrichmentVariant::gradient_weighted,
                 int quad_points = 3);

Eigen::VectorXd assemble_C(const DualMesh& dual);

/// Body-force and traction load. Tractions are given per facet tag; bubble
/// dofs take no traction contribution (their trace vanishes), only the body
/// force reaches them. Throws on a traction tag absent from the mesh.
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofmap,
                              const BodyForceFn& body_force,
                              const std::map<std::string, TractionFn>& tractions,
                              int quad_points = 3);

/// Full elasticity-tensor stiffness 2mu e(u):e(v) + lambda div u div v on the
/// pure Q1 space (dofmap built with with_bubbles = false); the locking
/// comparison operator.
SpMat assemble_standard_Q1(const Mesh& mesh, const DofMap& dofmap,
                           const MaterialParams& params, int quad_points = 3);

/// H1 Gram matrix of the velocity space, (u,v)_0 + (grad u, grad v)_0.
SpMat assemble_velocity_gram(const Mesh& mesh, const DofMap& dofmap,
                             int quad_points = 3);

/// Convenience: A, B, C and a load vector in one struct.
SystemMatrices assemble_system(const Mesh& mesh, const DualMesh& dual,
                               const DofMap& dofmap,
                               const MaterialParams& params,
                               const BodyForceFn& body_force = nullptr,
                               const std::map<std::string, TractionFn>& tractions = {});

/// Symmetric elimination of constrained dofs with the dofmap's prescribed
/// values: A rows/cols zeroed with unit diagonal, f adjusted and set to the
/// value on constrained rows, B columns zeroed with their contribution moved
/// into g. Idempotent.
void apply_dirichlet(SystemMatrices& system, const DofMap& dofmap);

/// Same elimination for a displacement-only operator (standard Q1 path).
void apply_dirichlet(SpMat& K, Eigen::VectorXd& f, const DofMap& dofmap);

}  // namespace dualpress
