// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#include "dualpress/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dualpress {

namespace {

void write_fields(std::ofstream& out, const std::vector<VtkField>& fields,
                  int n_entities, int dim) {
  for (const VtkField& f : fields) {
    if (static_cast<int>(f.data.size()) != n_entities * f.components) {
      throw std::invalid_argument("write_vtk: field '" + f.name +
                                  "' has inconsistent size");
    }
    char buf[64];
    if (f.components == 1) {
      out << "SCALARS " << f.name << " double 1\nLOOKUP_TABLE default\n";
      for (int i = 0; i < n_entities; ++i) {
        std::snprintf(buf, sizeof(buf), "%.12g\n", f.data[i]);
        out << buf;
      }
    } else {
      out << "VECTORS " << f.name << " double\n";
      for (int i = 0; i < n_entities; ++i) {
        double v[3] = {0.0, 0.0, 0.0};
        for (int a = 0; a < f.components && a < dim; ++a) {
          v[a] = f.data[i * f.components + a];
        }
        std::snprintf(buf, sizeof(buf), "%.12g %.12g %.12g\n", v[0], v[1],
                      v[2]);
        out << buf;
      }
    }
  }
}

}  // namespace

void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<VtkField>& point_fields,
               const std::vector<VtkField>& cell_fields) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_vtk: cannot open " + path);

  const int nv = mesh.n_vertices();
  const int ne = mesh.n_elements();
  const int nc = mesh.corners_per_element();

  out << "# vtk DataFile Version 3.0\ndualpress mesh\nASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  char buf[96];
  for (int v = 0; v < nv; ++v) {
    double x[3] = {0.0, 0.0, 0.0};
    for (int a = 0; a < mesh.dim; ++a) x[a] = mesh.vertex(v, a);
    std::snprintf(buf, sizeof(buf), "%.12g %.12g %.12g\n", x[0], x[1], x[2]);
    out << buf;
  }

  // Lexicographic corners -> VTK cell ordering.
  static const int kQuadOrder[4] = {0, 1, 3, 2};
  static const int kHexOrder[8] = {0, 1, 3, 2, 4, 5, 7, 6};
  const int* order = mesh.dim == 2 ? kQuadOrder : kHexOrder;

  out << "CELLS " << ne << " " << ne * (nc + 1) << "\n";
  for (int e = 0; e < ne; ++e) {
    out << nc;
    for (int c = 0; c < nc; ++c) out << " " << mesh.element_vertex(e, order[c]);
    out << "\n";
  }
  out << "CELL_TYPES " << ne << "\n";
  const int cell_type = mesh.dim == 2 ? 9 : 12;
  for (int e = 0; e < ne; ++e) out << cell_type << "\n";

  if (!point_fields.empty()) {
    out << "POINT_DATA " << nv << "\n";
    write_fields(out, point_fields, nv, mesh.dim);
  }
  if (!cell_fields.empty()) {
    out << "CELL_DATA " << ne << "\n";
    write_fields(out, cell_fields, ne, mesh.dim);
  }
}

}  // namespace dualpress
