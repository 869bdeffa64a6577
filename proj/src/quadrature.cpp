// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#include "dualpress/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace dualpress {

namespace {

// Gauss-Legendre abscissae/weights on (-1,1).
const double kGauss1[] = {0.0};
const double kWeight1[] = {2.0};

const double kGauss2[] = {-0.5773502691896257, 0.5773502691896257};
const double kWeight2[] = {1.0, 1.0};

const double kGauss3[] = {-0.7745966692414834, 0.0, 0.7745966692414834};
const double kWeight3[] = {0.5555555555555556, 0.8888888888888888,
                           0.5555555555555556};

const double kGauss4[] = {-0.8611363115940526, -0.3399810435848563,
                          0.3399810435848563, 0.8611363115940526};
const double kWeight4[] = {0.3478548451374538, 0.6521451548625461,
                           0.6521451548625461, 0.3478548451374538};

const double kGauss5[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                          0.5384693101056831, 0.9061798459386640};
const double kWeight5[] = {0.2369268850561891, 0.4786286704993665,
                           0.5688888888888889, 0.4786286704993665,
                           0.2369268850561891};

const double* kGauss[] = {kGauss1, kGauss2, kGauss3, kGauss4, kGauss5};
const double* kWeight[] = {kWeight1, kWeight2, kWeight3, kWeight4, kWeight5};

}  // namespace

void gauss_1d(int n, std::vector<double>& points, std::vector<double>& weights) {
  if (n < 1 || n > 5) {
    throw std::invalid_argument("gauss_1d: unsupported point count " +
                                std::to_string(n));
  }
  points.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    points[i] = 0.5 * (kGauss[n - 1][i] + 1.0);
    weights[i] = 0.5 * kWeight[n - 1][i];
  }
}

namespace {

QuadratureRule tensor_rule(int dim, int n, const double* lo, double scale) {
  if (dim < 1 || dim > 3) {
    throw std::invalid_argument("quadrature: dim must be 1, 2 or 3");
  }
  std::vector<double> p1, w1;
  gauss_1d(n, p1, w1);

  QuadratureRule rule;
  rule.dim = dim;
  int total = 1;
  for (int k = 0; k < dim; ++k) total *= n;
  rule.points.reserve(total);
  rule.weights.reserve(total);

  std::array<int, 3> idx = {0, 0, 0};
  for (int flat = 0; flat < total; ++flat) {
    int rest = flat;
    for (int k = 0; k < dim; ++k) {
      idx[k] = rest % n;
      rest /= n;
    }
    std::array<double, 3> x = {0.0, 0.0, 0.0};
    double w = 1.0;
    for (int k = 0; k < dim; ++k) {
      x[k] = lo[k] + scale * p1[idx[k]];
      w *= scale * w1[idx[k]];
    }
    rule.points.push_back(x);
    rule.weights.push_back(w);
  }
  return rule;
}

}  // namespace

QuadratureRule gauss_rule(int dim, int n) {
  const double lo[3] = {0.0, 0.0, 0.0};
  return tensor_rule(dim, n, lo, 1.0);
}

QuadratureRule sub_box_rule(int dim, int corner, int n) {
  if (corner < 0 || corner >= (1 << dim)) {
    throw std::invalid_argument("sub_box_rule: corner out of range");
  }
  double lo[3] = {0.0, 0.0, 0.0};
  for (int k = 0; k < dim; ++k) {
    lo[k] = ((corner >> k) & 1) ? 0.5 : 0.0;
  }
  return tensor_rule(dim, n, lo, 0.5);
}

QuadratureRule facet_rule(int dim, int n) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("facet_rule: dim must be 2 or 3");
  }
  const double lo[3] = {0.0, 0.0, 0.0};
  return tensor_rule(dim - 1, n, lo, 1.0);
}

}  // namespace dualpress
