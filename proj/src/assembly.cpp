// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#include "dualpress/assembly.hpp"

#include <cmath>
#include <stdexcept>

#include "dualpress/quadrature.hpp"

namespace dualpress {

MaterialParams lame_from_E_nu(double E, double nu) {
  if (E <= 0.0) throw std::invalid_argument("lame_from_E_nu: E must be > 0");
  if (nu < 0.0 || nu >= 0.5) {
    throw std::invalid_argument(
        "lame_from_E_nu: nu must lie in [0, 0.5); use stokes_params for the "
        "incompressible limit");
  }
  MaterialParams p;
  p.E = E;
  p.nu = nu;
  p.mu = E / (2.0 * (1.0 + nu));
  p.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  return p;
}

MaterialParams stokes_params(double gamma) {
  if (gamma <= 0.0) {
    throw std::invalid_argument("stokes_params: gamma must be > 0");
  }
  MaterialParams p;
  p.mu = 0.5 * gamma;
  p.lambda = std::numeric_limits<double>::infinity();
  p.stokes = true;
  return p;
}

namespace {

// Values, physical gradients and directions of all local velocity dofs at
// one quadrature point, in the element_velocity_dofs gather order.
struct FlatBasis {
  Eigen::VectorXd val;
  Eigen::MatrixXd grad;  // dim x nloc
  double detJ = 0.0;
  Eigen::VectorXd x;
};

void flatten(const ElementBasis& eb, int dim, bool with_bubbles,
             FlatBasis& fb) {
  const int nc = eb.q1.size();
  const int nloc = dim * nc + (with_bubbles ? dim : 0);
  fb.val.resize(nloc);
  fb.grad.resize(dim, nloc);
  for (int c = 0; c < nc; ++c) {
    for (int comp = 0; comp < dim; ++comp) {
      fb.val[dim * c + comp] = eb.q1[c];
      fb.grad.col(dim * c + comp) = eb.q1_grad.col(c);
    }
  }
  if (with_bubbles) {
    for (int j = 0; j < dim; ++j) {
      fb.val[dim * nc + j] = eb.enr[j];
      fb.grad.col(dim * nc + j) = eb.enr_grad.col(j);
    }
  }
  fb.detJ = eb.detJ;
  fb.x = eb.x;
}

inline int local_component(int s, int dim) { return s % dim; }
// Holds for both vertex dofs (component-minor) and bubble dofs (j-th bubble
// acts in direction j and dim*2^dim is divisible by dim).

using Triplets = std::vector<Eigen::Triplet<double>>;

template <typename EntryFn>
SpMat assemble_bilinear(const Mesh& mesh, const DofMap& dofmap,
                        EnrichmentVariant variant, int quad_points,
                        const EntryFn& entry) {
  const int dim = mesh.dim;
  const QuadratureRule rule = gauss_rule(dim, quad_points);
  const int nloc = dofmap.n_local_velocity_dofs();

  Triplets trip;
  trip.reserve(static_cast<std::size_t>(mesh.n_elements()) * nloc * nloc);
  std::vector<int> dofs;
  FlatBasis fb;
  Eigen::MatrixXd local(nloc, nloc);

  for (int e = 0; e < mesh.n_elements(); ++e) {
    local.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      const ElementBasis eb =
          eval_element_basis(mesh, e, rule.points[q].data(), variant);
      flatten(eb, dim, dofmap.with_bubbles, fb);
      const double w = rule.weights[q] * fb.detJ;
      for (int s = 0; s < nloc; ++s) {
        for (int t = 0; t < nloc; ++t) {
          local(s, t) += w * entry(fb, s, t, dim);
        }
      }
    }
    dofmap.element_velocity_dofs(mesh, e, dofs);
    for (int s = 0; s < nloc; ++s) {
      for (int t = 0; t < nloc; ++t) {
        trip.emplace_back(dofs[s], dofs[t], local(s, t));
      }
    }
  }

  SpMat M(dofmap.n_velocity_dofs(), dofmap.n_velocity_dofs());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

}  // namespace

SpMat assemble_A(const Mesh& mesh, const DofMap& dofmap,
                 const MaterialParams& params, EnrichmentVariant variant,
                 int quad_points) {
  const double mu = params.mu;
  return assemble_bilinear(
      mesh, dofmap, variant, quad_points,
      [mu](const FlatBasis& fb, int s, int t, int dim) {
        const int a = local_component(s, dim);
        const int b = local_component(t, dim);
        // 2mu eps(f e_a):eps(g e_b) = mu [d_ab grad f.grad g + f_,b g_,a]
        double v = fb.grad(b, s) * fb.grad(a, t);
        if (a == b) v += fb.grad.col(s).dot(fb.grad.col(t));
        return mu * v;
      });
}

SpMat assemble_standard_Q1(const Mesh& mesh, const DofMap& dofmap,
                           const MaterialParams& params, int quad_points) {
  if (dofmap.with_bubbles) {
    throw std::invalid_argument(
        "assemble_standard_Q1: needs a dofmap built without bubbles");
  }
  const double mu = params.mu;
  const double lambda = params.lambda;
  return assemble_bilinear(
      mesh, dofmap, EnrichmentVariant::gradient_weighted, quad_points,
      [mu, lambda](const FlatBasis& fb, int s, int t, int dim) {
        const int a = local_component(s, dim);
        const int b = local_component(t, dim);
        double v = mu * fb.grad(b, s) * fb.grad(a, t) +
                   lambda * fb.grad(a, s) * fb.grad(b, t);
        if (a == b) v += mu * fb.grad.col(s).dot(fb.grad.col(t));
        return v;
      });
}

SpMat assemble_velocity_gram(const Mesh& mesh, const DofMap& dofmap,
                             int quad_points) {
  return assemble_bilinear(
      mesh, dofmap, EnrichmentVariant::gradient_weighted, quad_points,
      [](const FlatBasis& fb, int s, int t, int dim) {
        if (local_component(s, dim) != local_component(t, dim)) return 0.0;
        return fb.val[s] * fb.val[t] + fb.grad.col(s).dot(fb.grad.col(t));
      });
}

SpMat assemble_B(const Mesh& mesh, const DualMesh& dual, const DofMap& dofmap,
                 EnrichmentVariant variant, int quad_points) {
  const int dim = mesh.dim;
  const int nc = mesh.corners_per_element();
  if (dual.n_cells() != mesh.n_vertices()) {
    throw std::invalid_argument("assemble_B: mesh/dual pair is inconsistent");
  }

  std::vector<QuadratureRule> rules;
  rules.reserve(nc);
  for (int c = 0; c < nc; ++c) rules.push_back(sub_box_rule(dim, c, quad_points));

  const int nloc = dofmap.n_local_velocity_dofs();
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(mesh.n_elements()) * nc * nloc);
  std::vector<int> dofs;
  FlatBasis fb;
  Eigen::VectorXd local(nloc);

  for (int e = 0; e < mesh.n_elements(); ++e) {
    dofmap.element_velocity_dofs(mesh, e, dofs);
    for (int c = 0; c < nc; ++c) {
      const QuadratureRule& rule = rules[c];
      local.setZero();
      for (int q = 0; q < rule.size(); ++q) {
        const ElementBasis eb =
            eval_element_basis(mesh, e, rule.points[q].data(), variant);
        flatten(eb, dim, dofmap.with_bubbles, fb);
        const double w = rule.weights[q] * fb.detJ;
        for (int s = 0; s < nloc; ++s) {
          local[s] += w * fb.grad(local_component(s, dim), s);
        }
      }
      const int row = mesh.element_vertex(e, c);
      for (int s = 0; s < nloc; ++s) trip.emplace_back(row, dofs[s], local[s]);
    }
  }

  SpMat B(dofmap.n_pressure_dofs(), dofmap.n_velocity_dofs());
  B.setFromTriplets(trip.begin(), trip.end());
  return B;
}

Eigen::VectorXd assemble_C(const DualMesh& dual) {
  return Eigen::Map<const Eigen::VectorXd>(dual.cell_volumes.data(),
                                           dual.n_cells());
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dofmap,
                              const BodyForceFn& body_force,
                              const std::map<std::string, TractionFn>& tractions,
                              int quad_points) {
  const int dim = mesh.dim;
  Eigen::VectorXd load = Eigen::VectorXd::Zero(dofmap.n_velocity_dofs());

  if (body_force) {
    const QuadratureRule rule = gauss_rule(dim, quad_points);
    const int nloc = dofmap.n_local_velocity_dofs();
    std::vector<int> dofs;
    std::vector<double> fval(dim);
    FlatBasis fb;
    for (int e = 0; e < mesh.n_elements(); ++e) {
      dofmap.element_velocity_dofs(mesh, e, dofs);
      for (int q = 0; q < rule.size(); ++q) {
        const ElementBasis eb =
            eval_element_basis(mesh, e, rule.points[q].data());
        flatten(eb, dim, dofmap.with_bubbles, fb);
        body_force(fb.x.data(), fval.data());
        const double w = rule.weights[q] * fb.detJ;
        for (int s = 0; s < nloc; ++s) {
          load[dofs[s]] += w * fb.val[s] * fval[local_component(s, dim)];
        }
      }
    }
  }

  if (!tractions.empty()) {
    for (const auto& [tag, fn] : tractions) {
      bool found = false;
      for (const BoundaryFacet& facet : mesh.boundary_facets) {
        if (facet.tag == tag) found = true;
      }
      if (!found) {
        throw std::invalid_argument("assemble_load: unknown facet tag '" +
                                    tag + "'");
      }
    }

    const QuadratureRule frule = facet_rule(dim, quad_points);
    const int nc = mesh.corners_per_element();
    Eigen::VectorXd q1;
    Eigen::MatrixXd q1g;
    std::vector<double> tval(dim);

    for (const BoundaryFacet& facet : mesh.boundary_facets) {
      const auto it = tractions.find(facet.tag);
      if (it == tractions.end()) continue;
      const int axis = facet.local_facet >> 1;
      const int side = facet.local_facet & 1;
      int free_axes[2] = {0, 0};
      int nf = 0;
      for (int k = 0; k < dim; ++k) {
        if (k != axis) free_axes[nf++] = k;
      }

      for (int q = 0; q < frule.size(); ++q) {
        double xhat[3] = {0.0, 0.0, 0.0};
        xhat[axis] = static_cast<double>(side);
        for (int m = 0; m < nf; ++m) xhat[free_axes[m]] = frule.points[q][m];

        const ElementJacobian jac =
            element_jacobian(mesh, facet.element, xhat);
        double measure;
        if (dim == 2) {
          measure = jac.J.col(free_axes[0]).norm();
        } else {
          Eigen::Vector3d t0 = jac.J.col(free_axes[0]);
          Eigen::Vector3d t1 = jac.J.col(free_axes[1]);
          measure = t0.cross(t1).norm();
        }

        eval_q1(dim, xhat, q1, q1g);
        it->second(jac.x.data(), tval.data());
        const double w = frule.weights[q] * measure;
        for (int c = 0; c < nc; ++c) {
          if (q1[c] == 0.0) continue;  // off-facet corners
          const std::int32_t v = mesh.element_vertex(facet.element, c);
          for (int comp = 0; comp < dim; ++comp) {
            load[dofmap.vertex_dof(v, comp)] += w * q1[c] * tval[comp];
          }
        }
      }
    }
  }

  return load;
}

SystemMatrices assemble_system(const Mesh& mesh, const DualMesh& dual,
                               const DofMap& dofmap,
                               const MaterialParams& params,
                               const BodyForceFn& body_force,
                               const std::map<std::string, TractionFn>& tractions) {
  SystemMatrices sys;
  sys.A = assemble_A(mesh, dofmap, params);
  sys.B = assemble_B(mesh, dual, dofmap);
  sys.C = assemble_C(dual);
  sys.f = assemble_load(mesh, dofmap, body_force, tractions);
  sys.g = Eigen::VectorXd::Zero(dofmap.n_pressure_dofs());
  return sys;
}

namespace {

SpMat eliminate_rows_cols(const SpMat& M, const std::vector<char>& mask,
                          bool unit_diagonal) {
  Triplets trip;
  trip.reserve(M.nonZeros() + M.rows());
  for (int k = 0; k < M.outerSize(); ++k) {
    for (SpMat::InnerIterator it(M, k); it; ++it) {
      if (!mask[it.row()] && !mask[it.col()]) {
        trip.emplace_back(it.row(), it.col(), it.value());
      }
    }
  }
  if (unit_diagonal) {
    for (int i = 0; i < M.rows(); ++i) {
      if (mask[i]) trip.emplace_back(i, i, 1.0);
    }
  }
  SpMat out(M.rows(), M.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpMat eliminate_cols(const SpMat& M, const std::vector<char>& mask) {
  Triplets trip;
  trip.reserve(M.nonZeros());
  for (int k = 0; k < M.outerSize(); ++k) {
    for (SpMat::InnerIterator it(M, k); it; ++it) {
      if (!mask[it.col()]) trip.emplace_back(it.row(), it.col(), it.value());
    }
  }
  SpMat out(M.rows(), M.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

Eigen::VectorXd constrained_values(const DofMap& dofmap) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dofmap.n_velocity_dofs());
  for (int i = 0; i < dofmap.n_velocity_dofs(); ++i) {
    if (dofmap.dirichlet[i]) g[i] = dofmap.dirichlet_values[i];
  }
  return g;
}

}  // namespace

void apply_dirichlet(SystemMatrices& system, const DofMap& dofmap) {
  const Eigen::VectorXd gval = constrained_values(dofmap);
  system.f -= system.A * gval;
  system.g -= system.B * gval;
  system.A = eliminate_rows_cols(system.A, dofmap.dirichlet, true);
  system.B = eliminate_cols(system.B, dofmap.dirichlet);
  for (int i = 0; i < dofmap.n_velocity_dofs(); ++i) {
    if (dofmap.dirichlet[i]) system.f[i] = dofmap.dirichlet_values[i];
  }
  system.dirichlet_applied = true;
}

void apply_dirichlet(SpMat& K, Eigen::VectorXd& f, const DofMap& dofmap) {
  const Eigen::VectorXd gval = constrained_values(dofmap);
  f -= K * gval;
  K = eliminate_rows_cols(K, dofmap.dirichlet, true);
  for (int i = 0; i < dofmap.n_velocity_dofs(); ++i) {
    if (dofmap.dirichlet[i]) f[i] = dofmap.dirichlet_values[i];
  }
}

}  // namespace dualpress
