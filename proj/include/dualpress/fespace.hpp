// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "dualpress/mesh.hpp"

namespace dualpress {

/// Q1 (bi/trilinear) shape values and reference gradients at a reference
/// point, in lexicographic corner order. `values` holds 2^dim entries,
/// `gradients` is dim x 2^dim (column per corner).
void eval_q1(int dim, const double* xhat, Eigen::VectorXd& values,
             Eigen::MatrixXd& gradients);

/// Element bubble on the reference element: b(x) = prod_k 4 x_k (1-x_k).
/// Vanishes on the boundary, equals 1 at the center.
void eval_bubble(int dim, const double* xhat, double& value,
                 Eigen::VectorXd& gradient);

/// Q1 isoparametric map data at one reference point of one element.
struct ElementJacobian {
  Eigen::MatrixXd J;     // dim x dim, dx/dxhat
  Eigen::MatrixXd Jinv;
  double det = 0.0;
  Eigen::VectorXd x;     // physical image of the reference point
};

/// Throws std::runtime_error if the Jacobian determinant is not strictly
/// positive (inverted or degenerate cell).
ElementJacobian element_jacobian(const Mesh& mesh, int elem,
                                 const double* xhat);

/// Which element-local bubble fields enrich the velocity space.
/// gradient_weighted is the method's basis, (d phi_T / d x_j) b_T e_j with
/// phi_T the Q1 function anchored at reference corner 0; plain_bubble is the
/// comparison variant b_T e_j that loses one rank in the patch test.
enum class EnrichmentVariant { gradient_weighted, plain_bubble };

/// Values and physical gradients of every scalar shape factor of one element
/// at one reference point. Velocity dofs are (scalar factor) * e_comp:
/// vertex dof (c, comp) uses q1 column c, enrichment dof j uses enr[j] with
/// direction j.
struct ElementBasis {
  double detJ = 0.0;
  Eigen::VectorXd x;         // physical point
  Eigen::VectorXd q1;        // 2^dim values
  Eigen::MatrixXd q1_grad;   // dim x 2^dim, physical gradients
  Eigen::VectorXd enr;       // dim values
  Eigen::MatrixXd enr_grad;  // dim x dim, column j = physical gradient
};

ElementBasis eval_element_basis(
    const Mesh& mesh, int elem, const double* xhat,
    EnrichmentVariant variant = EnrichmentVariant::gradient_weighted);

/// Global velocity/pressure degree-of-freedom map for V_h = [Q1]^d (+) B_h
/// and the dual-cell pressure space. Velocity numbering: vertex dofs first
/// (vertex-major, component-minor), then dim bubble dofs per element
/// (element-major). Pressure dofs coincide with vertex indices.
struct DofMap {
  int dim = 2;
  int n_vertices = 0;
  int n_elements = 0;
  bool with_bubbles = true;
  std::vector<char> dirichlet;           // per velocity dof
  std::vector<double> dirichlet_values;  // per velocity dof, 0 default

  int n_vertex_dofs() const { return dim * n_vertices; }
  int n_bubble_dofs() const { return with_bubbles ? dim * n_elements : 0; }
  int n_velocity_dofs() const { return n_vertex_dofs() + n_bubble_dofs(); }
  int n_pressure_dofs() const { return n_vertices; }

  int vertex_dof(int v, int comp) const { return dim * v + comp; }
  int bubble_dof(int e, int j) const { return n_vertex_dofs() + dim * e + j; }

  int n_local_velocity_dofs() const {
    return dim * (1 << dim) + (with_bubbles ? dim : 0);
  }

  /// Gather list of the element's velocity dofs, vertex dofs first
  /// (corner-major, component-minor), then the element's bubble dofs.
  void element_velocity_dofs(const Mesh& mesh, int e,
                             std::vector<int>& dofs) const;

  int n_free_dofs() const;

  void constrain(int dof, double value = 0.0) {
    dirichlet[dof] = 1;
    dirichlet_values[dof] = value;
  }
  void clear_dirichlet();

  /// Sets prescribed values at every currently constrained vertex dof by
  /// evaluating `u` (dim components) at the vertex position.
  void set_dirichlet_values(
      const Mesh& mesh,
      const std::function<void(const double* x, double* u)>& u);
};

/// Builds the dof map with the Dirichlet mask taken from
/// mesh.boundary_vertices (all components constrained, value 0). Bubble dofs
/// are never constrained.
DofMap build_dofmap(const Mesh& mesh, const DualMesh& dual,
                    bool with_bubbles = true);

/// Newton inversion of the element map. Returns true if `x` lies in element
/// `elem` (reference coordinates within [-tol, 1+tol]); fills xhat.
bool invert_element_map(const Mesh& mesh, int elem, const double* x,
                        double* xhat, double tol = 1e-9);

/// Linear scan over elements; returns the first element containing x, or -1.
int locate_point(const Mesh& mesh, const double* x);

}  // namespace dualpress
