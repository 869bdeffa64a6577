// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#pragma once

#include <string>
#include <vector>

#include "dualpress/mesh.hpp"

namespace dualpress {

/// Named field for VTK export; components is 1 (scalar) or dim (vector),
/// data is entity-major.
struct VtkField {
  std::string name;
  int components = 1;
  std::vector<double> data;
};

/// Legacy ASCII VTK (UNSTRUCTURED_GRID, cell types 9/12) with optional
/// per-vertex and per-cell fields.
void write_vtk(const std::string& path, const Mesh& mesh,
               const std::vector<VtkField>& point_fields = {},
               const std::vector<VtkField>& cell_fields = {});

}  // namespace dualpress
