// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace dualpress {

/// Boundary facet of an element, addressed as (element, local facet).
/// Local facet f = 2*axis + side: the reference-element face where
/// coordinate `axis` is fixed to `side` (0 or 1).
struct BoundaryFacet {
  std::int32_t element = -1;
  std::int8_t local_facet = -1;
  std::string tag;
};

/// Primal quadrilateral/hexahedral mesh.
///
/// Element corners are stored in tensor-product (lexicographic) order with
/// respect to the reference element (0,1)^dim: local corner c has reference
/// coordinates (bit0(c), bit1(c)[, bit2(c)]). The element map is the Q1
/// isoparametric map of the corner coordinates; for structured rectangular
/// grids it is affine.
struct Mesh {
  int dim = 2;
  std::vector<double> vertices;               // dim * n_vertices, vertex-major
  std::vector<std::int32_t> elements;         // 2^dim * n_elements
  std::vector<std::int32_t> boundary_vertices;  // sorted, unique; Dirichlet set
  std::vector<BoundaryFacet> boundary_facets;   // tagged, for traction loads

  int n_vertices() const { return static_cast<int>(vertices.size()) / dim; }
  int n_elements() const {
    return static_cast<int>(elements.size()) / corners_per_element();
  }
  int corners_per_element() const { return 1 << dim; }

  double vertex(int v, int k) const { return vertices[dim * v + k]; }
  std::int32_t element_vertex(int e, int c) const {
    return elements[corners_per_element() * e + c];
  }

  /// Per-vertex flag, true for vertices in boundary_vertices.
  std::vector<char> boundary_vertex_mask() const;
};

/// Vertex-centered dual mesh of control volumes. Each primal element is cut
/// at the reference midpoint 1/2 per axis into 2^dim corner sub-boxes; the
/// sub-box at local corner c belongs to the control volume of the vertex
/// sitting at that corner. Only the (element, corner) decomposition and the
/// quadrature volumes are stored; no polygon geometry is built.
struct DualMesh {
  std::vector<double> cell_volumes;     // |V_i| per vertex
  std::vector<double> subcell_volumes;  // [e * 2^dim + c]

  int n_cells() const { return static_cast<int>(cell_volumes.size()); }
};

/// The 2^dim elements sharing an interior vertex, plus their vertex closure.
struct Patch {
  std::int32_t center_vertex = -1;
  std::vector<std::int32_t> elements;
  std::vector<std::int32_t> vertices;  // sorted, unique
};

/// Structured tensor-product grid of axis-aligned rectangles/boxes covering
/// [origin, origin+lengths]. All boundary vertices are put in
/// boundary_vertices; boundary facets are tagged "x0","x1","y0","y1"
/// ("z0","z1" in 3D) by the side they lie on.
Mesh generate_rect_grid(const std::vector<double>& lengths,
                        const std::vector<int>& counts,
                        const std::vector<double>& origin = {});

/// n x n mesh of the Cook membrane trapezoid with corners
/// (0,0),(48,44),(48,60),(0,44), by bilinear interpolation of the corners.
/// Left-edge (x=0) vertices are marked Dirichlet; right-edge (x=48) facets
/// are tagged "load".
Mesh generate_cook_mesh(int n);

/// Builds the dual mesh; subcell volumes by Gauss quadrature on the corner
/// sub-boxes. Throws on degenerate element Jacobians.
DualMesh build_dual(const Mesh& mesh);

/// Extracts the patch of the 2^dim elements touching `vertex`. The vertex
/// must be interior and of regular valence.
Patch extract_patch(const Mesh& mesh, int vertex);

}  // namespace dualpress
