// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#include "dualpress/fespace.hpp"

#include <cmath>
#include <stdexcept>

namespace dualpress {

namespace {

// 1D Q1 factor and its derivative sign for one corner bit.
inline double line_val(int bit, double t) { return bit ? t : 1.0 - t; }
inline double line_d(int bit) { return bit ? 1.0 : -1.0; }

// Reference Hessian of the Q1 function of corner c: mixed entries only.
void q1_hessian(int dim, int c, const double* xhat, Eigen::MatrixXd& hess) {
  hess.setZero(dim, dim);
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      double v = line_d((c >> a) & 1) * line_d((c >> b) & 1);
      for (int k = 0; k < dim; ++k) {
        if (k != a && k != b) v *= line_val((c >> k) & 1, xhat[k]);
      }
      hess(a, b) = v;
      hess(b, a) = v;
    }
  }
}

void corner_coords(const Mesh& mesh, int elem, Eigen::MatrixXd& V) {
  const int dim = mesh.dim;
  const int nc = mesh.corners_per_element();
  V.resize(dim, nc);
  for (int c = 0; c < nc; ++c) {
    const std::int32_t v = mesh.element_vertex(elem, c);
    for (int a = 0; a < dim; ++a) V(a, c) = mesh.vertex(v, a);
  }
}

}  // namespace

void eval_q1(int dim, const double* xhat, Eigen::VectorXd& values,
             Eigen::MatrixXd& gradients) {
  const int nc = 1 << dim;
  values.resize(nc);
  gradients.resize(dim, nc);
  for (int c = 0; c < nc; ++c) {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= line_val((c >> k) & 1, xhat[k]);
    values[c] = v;
    for (int a = 0; a < dim; ++a) {
      double g = line_d((c >> a) & 1);
      for (int k = 0; k < dim; ++k) {
        if (k != a) g *= line_val((c >> k) & 1, xhat[k]);
      }
      gradients(a, c) = g;
    }
  }
}

void eval_bubble(int dim, const double* xhat, double& value,
                 Eigen::VectorXd& gradient) {
  gradient.resize(dim);
  value = 1.0;
  for (int k = 0; k < dim; ++k) value *= 4.0 * xhat[k] * (1.0 - xhat[k]);
  for (int a = 0; a < dim; ++a) {
    double g = 4.0 - 8.0 * xhat[a];
    for (int k = 0; k < dim; ++k) {
      if (k != a) g *= 4.0 * xhat[k] * (1.0 - xhat[k]);
    }
    gradient[a] = g;
  }
}

ElementJacobian element_jacobian(const Mesh& mesh, int elem,
                                 const double* xhat) {
  const int dim = mesh.dim;
  Eigen::MatrixXd V;
  corner_coords(mesh, elem, V);

  Eigen::VectorXd vals;
  Eigen::MatrixXd refgrad;
  eval_q1(dim, xhat, vals, refgrad);

  ElementJacobian out;
  out.J = V * refgrad.transpose();  // J(a,b) = sum_c V(a,c) dN_c/dxhat_b
  out.det = out.J.determinant();
  if (!(out.det > 0.0) || !std::isfinite(out.det)) {
    throw std::runtime_error(
        "element_jacobian: non-positive Jacobian determinant in element " +
        std::to_string(elem));
  }
  out.Jinv = out.J.inverse();
  out.x = V * vals;
  return out;
}

ElementBasis eval_element_basis(const Mesh& mesh, int elem, const double* xhat,
                                EnrichmentVariant variant) {
  const int dim = mesh.dim;
  const int nc = 1 << dim;

  Eigen::MatrixXd V;
  corner_coords(mesh, elem, V);

  ElementBasis out;
  Eigen::MatrixXd refgrad;
  eval_q1(dim, xhat, out.q1, refgrad);

  Eigen::MatrixXd J = V * refgrad.transpose();
  const double det = J.determinant();
  if (!(det > 0.0) || !std::isfinite(det)) {
    throw std::runtime_error(
        "eval_element_basis: non-positive Jacobian determinant in element " +
        std::to_string(elem));
  }
  out.detJ = det;
  out.x = V * out.q1;
  const Eigen::MatrixXd M = J.inverse().transpose();  // J^{-T}

  out.q1_grad = M * refgrad;

  double bval;
  Eigen::VectorXd bgrad;
  eval_bubble(dim, xhat, bval, bgrad);

  out.enr.resize(dim);
  out.enr_grad.resize(dim, dim);

  if (variant == EnrichmentVariant::plain_bubble) {
    const Eigen::VectorXd g = M * bgrad;
    for (int j = 0; j < dim; ++j) {
      out.enr[j] = bval;
      out.enr_grad.col(j) = g;
    }
    return out;
  }

  // Gradient-weighted bubbles: scalar factor w_j = (d phi_T / d x_j) b_T,
  // with phi_T the Q1 function of reference corner 0. The reference gradient
  // of the physical derivative field g = J^{-T} grad_ref(phi) picks up a
  // dJ/dxhat term on non-affine cells.
  Eigen::MatrixXd hess0;
  q1_hessian(dim, 0, xhat, hess0);
  const Eigen::VectorXd gphi_ref = refgrad.col(0);
  const Eigen::VectorXd gphi = M * gphi_ref;

  std::vector<Eigen::MatrixXd> hess(nc);
  for (int c = 0; c < nc; ++c) q1_hessian(dim, c, xhat, hess[c]);

  Eigen::MatrixXd dgphi(dim, dim);  // column k = d(gphi)/dxhat_k
  for (int k = 0; k < dim; ++k) {
    Eigen::MatrixXd dJk(dim, dim);
    for (int a = 0; a < dim; ++a) {
      for (int b = 0; b < dim; ++b) {
        double s = 0.0;
        for (int c = 0; c < nc; ++c) s += V(a, c) * hess[c](b, k);
        dJk(a, b) = s;
      }
    }
    dgphi.col(k) =
        M * hess0.col(k) - M * dJk.transpose() * (M * gphi_ref);
  }

  for (int j = 0; j < dim; ++j) {
    out.enr[j] = gphi[j] * bval;
    Eigen::VectorXd refg(dim);
    for (int k = 0; k < dim; ++k) {
      refg[k] = dgphi(j, k) * bval + gphi[j] * bgrad[k];
    }
    out.enr_grad.col(j) = M * refg;
  }
  return out;
}

void DofMap::element_velocity_dofs(const Mesh& mesh, int e,
                                   std::vector<int>& dofs) const {
  const int nc = mesh.corners_per_element();
  dofs.clear();
  dofs.reserve(n_local_velocity_dofs());
  for (int c = 0; c < nc; ++c) {
    const std::int32_t v = mesh.element_vertex(e, c);
    for (int comp = 0; comp < dim; ++comp) dofs.push_back(vertex_dof(v, comp));
  }
  if (with_bubbles) {
    for (int j = 0; j < dim; ++j) dofs.push_back(bubble_dof(e, j));
  }
}

int DofMap::n_free_dofs() const {
  int n = 0;
  for (char c : dirichlet) {
    if (!c) ++n;
  }
  return n;
}

void DofMap::clear_dirichlet() {
  dirichlet.assign(n_velocity_dofs(), 0);
  dirichlet_values.assign(n_velocity_dofs(), 0.0);
}

void DofMap::set_dirichlet_values(
    const Mesh& mesh,
    const std::function<void(const double* x, double* u)>& u) {
  std::vector<double> val(dim);
  for (int v = 0; v < n_vertices; ++v) {
    bool any = false;
    for (int comp = 0; comp < dim; ++comp) {
      if (dirichlet[vertex_dof(v, comp)]) any = true;
    }
    if (!any) continue;
    u(&mesh.vertices[static_cast<std::size_t>(dim) * v], val.data());
    for (int comp = 0; comp < dim; ++comp) {
      const int dof = vertex_dof(v, comp);
      if (dirichlet[dof]) dirichlet_values[dof] = val[comp];
    }
  }
}

DofMap build_dofmap(const Mesh& mesh, const DualMesh& dual, bool with_bubbles) {
  if (dual.n_cells() != mesh.n_vertices()) {
    throw std::invalid_argument("build_dofmap: mesh/dual pair is inconsistent");
  }
  DofMap map;
  map.dim = mesh.dim;
  map.n_vertices = mesh.n_vertices();
  map.n_elements = mesh.n_elements();
  map.with_bubbles = with_bubbles;
  map.clear_dirichlet();
  for (std::int32_t v : mesh.boundary_vertices) {
    for (int comp = 0; comp < map.dim; ++comp) {
      map.dirichlet[map.vertex_dof(v, comp)] = 1;
    }
  }
  return map;
}

bool invert_element_map(const Mesh& mesh, int elem, const double* x,
                        double* xhat, double tol) {
  const int dim = mesh.dim;
  Eigen::VectorXd xh = Eigen::VectorXd::Constant(dim, 0.5);
  Eigen::VectorXd target(dim);
  for (int a = 0; a < dim; ++a) target[a] = x[a];

  for (int it = 0; it < 50; ++it) {
    const ElementJacobian jac = element_jacobian(mesh, elem, xh.data());
    const Eigen::VectorXd r = target - jac.x;
    xh += jac.Jinv * r;
    if (r.norm() <= 1e-13 * (1.0 + target.norm())) break;
    // Keep Newton from wandering far outside the cell on bilinear maps.
    for (int a = 0; a < dim; ++a) xh[a] = std::clamp(xh[a], -0.5, 1.5);
  }
  const ElementJacobian jac = element_jacobian(mesh, elem, xh.data());
  if ((target - jac.x).norm() > 1e-10 * (1.0 + target.norm())) return false;
  for (int a = 0; a < dim; ++a) {
    if (xh[a] < -tol || xh[a] > 1.0 + tol) return false;
    xhat[a] = xh[a];
  }
  return true;
}

int locate_point(const Mesh& mesh, const double* x) {
  double xhat[3];
  for (int e = 0; e < mesh.n_elements(); ++e) {
    if (invert_element_map(mesh, e, x, xhat)) return e;
  }
  return -1;
}

}  // namespace dualpress
