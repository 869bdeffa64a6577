// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#include "dualpress/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "dualpress/fespace.hpp"
#include "dualpress/quadrature.hpp"

namespace dualpress {

std::vector<char> Mesh::boundary_vertex_mask() const {
  std::vector<char> mask(n_vertices(), 0);
  for (std::int32_t v : boundary_vertices) mask[v] = 1;
  return mask;
}

namespace {

int linear_index(const std::vector<int>& nv, int i, int j, int k) {
  return (k * nv[1] + j) * nv[0] + i;
}

void check_element_validity(const Mesh& mesh) {
  const int nc = mesh.corners_per_element();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int c = 0; c < nc; ++c) {
      const std::int32_t v = mesh.element_vertex(e, c);
      if (v < 0 || v >= mesh.n_vertices()) {
        throw std::runtime_error("mesh: element references missing vertex");
      }
      for (int c2 = c + 1; c2 < nc; ++c2) {
        if (mesh.element_vertex(e, c2) == v) {
          throw std::runtime_error("mesh: repeated vertex within an element");
        }
      }
    }
  }
  // Positive Jacobian at every quadrature point of the default rule.
  const QuadratureRule rule = gauss_rule(mesh.dim, 3);
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int q = 0; q < rule.size(); ++q) {
      element_jacobian(mesh, e, rule.points[q].data());  // throws if detJ <= 0
    }
  }
}

}  // namespace

Mesh generate_rect_grid(const std::vector<double>& lengths,
                        const std::vector<int>& counts,
                        const std::vector<double>& origin) {
  const int dim = static_cast<int>(lengths.size());
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("generate_rect_grid: dim must be 2 or 3");
  }
  if (static_cast<int>(counts.size()) != dim) {
    throw std::invalid_argument("generate_rect_grid: lengths/counts mismatch");
  }
  for (int k = 0; k < dim; ++k) {
    if (lengths[k] <= 0.0) {
      throw std::invalid_argument("generate_rect_grid: extents must be > 0");
    }
    if (counts[k] < 1) {
      throw std::invalid_argument("generate_rect_grid: counts must be >= 1");
    }
  }
  std::vector<double> org(dim, 0.0);
  if (!origin.empty()) {
    if (static_cast<int>(origin.size()) != dim) {
      throw std::invalid_argument("generate_rect_grid: origin size mismatch");
    }
    org = origin;
  }

  Mesh mesh;
  mesh.dim = dim;
  std::vector<int> nv(3, 1), ne(3, 1);
  for (int k = 0; k < dim; ++k) {
    ne[k] = counts[k];
    nv[k] = counts[k] + 1;
  }

  mesh.vertices.reserve(static_cast<std::size_t>(dim) * nv[0] * nv[1] * nv[2]);
  for (int k = 0; k < nv[2]; ++k) {
    for (int j = 0; j < nv[1]; ++j) {
      for (int i = 0; i < nv[0]; ++i) {
        const int idx[3] = {i, j, k};
        for (int a = 0; a < dim; ++a) {
          mesh.vertices.push_back(org[a] + lengths[a] * idx[a] / ne[a]);
        }
      }
    }
  }

  const int nc = 1 << dim;
  mesh.elements.reserve(static_cast<std::size_t>(nc) * ne[0] * ne[1] * ne[2]);
  for (int k = 0; k < (dim == 3 ? ne[2] : 1); ++k) {
    for (int j = 0; j < ne[1]; ++j) {
      for (int i = 0; i < ne[0]; ++i) {
        for (int c = 0; c < nc; ++c) {
          const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
          mesh.elements.push_back(linear_index(nv, i + di, j + dj, k + dk));
        }
      }
    }
  }

  // All geometric boundary vertices form the default Dirichlet set.
  for (int k = 0; k < nv[2]; ++k) {
    for (int j = 0; j < nv[1]; ++j) {
      for (int i = 0; i < nv[0]; ++i) {
        const int idx[3] = {i, j, k};
        bool on_boundary = false;
        for (int a = 0; a < dim; ++a) {
          if (idx[a] == 0 || idx[a] == ne[a]) on_boundary = true;
        }
        if (on_boundary) {
          mesh.boundary_vertices.push_back(linear_index(nv, i, j, k));
        }
      }
    }
  }
  std::sort(mesh.boundary_vertices.begin(), mesh.boundary_vertices.end());

  // Tag boundary facets by side.
  static const char* kSide[6] = {"x0", "x1", "y0", "y1", "z0", "z1"};
  for (int k = 0; k < (dim == 3 ? ne[2] : 1); ++k) {
    for (int j = 0; j < ne[1]; ++j) {
      for (int i = 0; i < ne[0]; ++i) {
        const int e =
            (dim == 3) ? (k * ne[1] + j) * ne[0] + i : j * ne[0] + i;
        const int idx[3] = {i, j, k};
        for (int a = 0; a < dim; ++a) {
          if (idx[a] == 0) {
            mesh.boundary_facets.push_back(
                {e, static_cast<std::int8_t>(2 * a), kSide[2 * a]});
          }
          if (idx[a] == ne[a] - 1) {
            mesh.boundary_facets.push_back(
                {e, static_cast<std::int8_t>(2 * a + 1), kSide[2 * a + 1]});
          }
        }
      }
    }
  }

  check_element_validity(mesh);
  return mesh;
}

Mesh generate_cook_mesh(int n) {
  if (n < 1) throw std::invalid_argument("generate_cook_mesh: n must be >= 1");

  // Corner order of the bilinear parameter square (s,t).
  const double cx[4] = {0.0, 48.0, 0.0, 48.0};   // (0,0) (1,0) (0,1) (1,1)
  const double cy[4] = {0.0, 44.0, 44.0, 60.0};

  Mesh mesh;
  mesh.dim = 2;
  const int nv1 = n + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(2) * nv1 * nv1);
  for (int j = 0; j < nv1; ++j) {
    for (int i = 0; i < nv1; ++i) {
      const double s = static_cast<double>(i) / n;
      const double t = static_cast<double>(j) / n;
      const double w[4] = {(1 - s) * (1 - t), s * (1 - t), (1 - s) * t, s * t};
      double x = 0.0, y = 0.0;
      for (int c = 0; c < 4; ++c) {
        x += w[c] * cx[c];
        y += w[c] * cy[c];
      }
      mesh.vertices.push_back(x);
      mesh.vertices.push_back(y);
    }
  }

  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      mesh.elements.push_back(j * nv1 + i);
      mesh.elements.push_back(j * nv1 + i + 1);
      mesh.elements.push_back((j + 1) * nv1 + i);
      mesh.elements.push_back((j + 1) * nv1 + i + 1);
    }
  }

  // Clamped left edge (s=0), sheared right edge (s=1).
  for (int j = 0; j < nv1; ++j) {
    mesh.boundary_vertices.push_back(j * nv1);
  }
  std::sort(mesh.boundary_vertices.begin(), mesh.boundary_vertices.end());
  for (int j = 0; j < n; ++j) {
    mesh.boundary_facets.push_back(
        {j * n + (n - 1), static_cast<std::int8_t>(1), "load"});
  }

  check_element_validity(mesh);
  return mesh;
}

DualMesh build_dual(const Mesh& mesh) {
  const int dim = mesh.dim;
  const int nc = mesh.corners_per_element();

  std::vector<QuadratureRule> corner_rules;
  corner_rules.reserve(nc);
  for (int c = 0; c < nc; ++c) corner_rules.push_back(sub_box_rule(dim, c, 3));

  DualMesh dual;
  dual.cell_volumes.assign(mesh.n_vertices(), 0.0);
  dual.subcell_volumes.assign(static_cast<std::size_t>(mesh.n_elements()) * nc,
                              0.0);

  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int c = 0; c < nc; ++c) {
      const QuadratureRule& rule = corner_rules[c];
      double vol = 0.0;
      for (int q = 0; q < rule.size(); ++q) {
        vol += rule.weights[q] *
               element_jacobian(mesh, e, rule.points[q].data()).det;
      }
      dual.subcell_volumes[static_cast<std::size_t>(e) * nc + c] = vol;
      dual.cell_volumes[mesh.element_vertex(e, c)] += vol;
    }
  }
  return dual;
}

Patch extract_patch(const Mesh& mesh, int vertex) {
  if (vertex < 0 || vertex >= mesh.n_vertices()) {
    throw std::invalid_argument("extract_patch: vertex index out of range");
  }
  const auto mask = mesh.boundary_vertex_mask();
  if (mask[vertex]) {
    throw std::invalid_argument("extract_patch: vertex lies on the boundary");
  }

  Patch patch;
  patch.center_vertex = vertex;
  const int nc = mesh.corners_per_element();
  std::set<std::int32_t> verts;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    bool touches = false;
    for (int c = 0; c < nc; ++c) {
      if (mesh.element_vertex(e, c) == vertex) touches = true;
    }
    if (touches) {
      patch.elements.push_back(e);
      for (int c = 0; c < nc; ++c) verts.insert(mesh.element_vertex(e, c));
    }
  }
  if (static_cast<int>(patch.elements.size()) != nc) {
    throw std::invalid_argument(
        "extract_patch: vertex valence is not 2^dim (irregular vertex)");
  }
  patch.vertices.assign(verts.begin(), verts.end());
  return patch;
}

}  // namespace dualpress
