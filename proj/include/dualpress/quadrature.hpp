// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#pragma once

#include <array>
#include <vector>

namespace dualpress {

/// Tensor-product Gauss-Legendre rule on the reference element (0,1)^dim
/// or on one of its corner sub-boxes. Points are stored padded to 3
/// components; unused components are 0.
struct QuadratureRule {
  int dim = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
};

/// n-point Gauss-Legendre nodes/weights on (0,1). 1 <= n <= 5, exact for
/// polynomials of degree 2n-1.
void gauss_1d(int n, std::vector<double>& points, std::vector<double>& weights);

/// Tensor rule with n points per axis on (0,1)^dim.
QuadratureRule gauss_rule(int dim, int n);

/// Tensor rule on the corner sub-box of (0,1)^dim cut at 1/2 per axis.
/// `corner` indexes the sub-box lexicographically: bit k of corner selects
/// the upper half along axis k. Weights carry the sub-box measure, so they
/// sum to (1/2)^dim.
QuadratureRule sub_box_rule(int dim, int corner, int n);

/// Rule on the (dim-1)-dimensional reference facet [0,1]^(dim-1); for dim=2
/// this is a 1D edge rule, for dim=3 a tensor rule on the reference face.
QuadratureRule facet_rule(int dim, int n);

}  // namespace dualpress
