// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#include "dualpress/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

#include "dualpress/quadrature.hpp"

namespace dualpress {

ExactSolution beam_exact(const BeamParams& params) {
  if (params.l <= 0.0) throw std::invalid_argument("beam_exact: l must be > 0");
  if (params.nu <= 0.0 || params.nu > 0.5) {
    throw std::invalid_argument("beam_exact: nu must lie in (0, 1/2]");
  }
  const double k = params.f * (1.0 - params.nu * params.nu) /
                   (params.E * params.l);
  const double r = params.nu / (1.0 - params.nu);
  const double l = params.l;
  const double nu = params.nu;
  const double f = params.f;

  ExactSolution exact;
  exact.dim = 2;
  exact.displacement = [k, r, l](const double* x, double* u) {
    u[0] = k * x[0] * (l - 2.0 * x[1]);
    u[1] = k * (x[0] * x[0] + r * x[1] * (x[1] - l));
  };
  exact.gradient = [k, r, l](const double* x, double* g) {
    g[0] = k * (l - 2.0 * x[1]);   // du/dx
    g[1] = -2.0 * k * x[0];        // du/dy
    g[2] = 2.0 * k * x[0];         // dv/dx
    g[3] = k * r * (2.0 * x[1] - l);  // dv/dy
  };
  exact.pressure = [nu, f, l](const double* x) {
    return nu * f * (l - 2.0 * x[1]) / l;
  };
  return exact;
}

ExactSolution zero_solution(int dim) {
  ExactSolution z;
  z.dim = dim;
  z.displacement = [dim](const double*, double* u) {
    for (int a = 0; a < dim; ++a) u[a] = 0.0;
  };
  z.gradient = [dim](const double*, double* g) {
    for (int a = 0; a < dim * dim; ++a) g[a] = 0.0;
  };
  z.pressure = [](const double*) { return 0.0; };
  return z;
}

void eval_fe_velocity(const Mesh& mesh, const DofMap& dofmap,
                      const Eigen::VectorXd& u, int elem, const double* xhat,
                      double* value, double* gradient) {
  const int dim = mesh.dim;
  const int nc = mesh.corners_per_element();
  const ElementBasis eb = eval_element_basis(mesh, elem, xhat);

  for (int a = 0; a < dim; ++a) value[a] = 0.0;
  if (gradient) {
    for (int a = 0; a < dim * dim; ++a) gradient[a] = 0.0;
  }

  for (int c = 0; c < nc; ++c) {
    const std::int32_t v = mesh.element_vertex(elem, c);
    for (int comp = 0; comp < dim; ++comp) {
      const double coef = u[dofmap.vertex_dof(v, comp)];
      value[comp] += coef * eb.q1[c];
      if (gradient) {
        for (int b = 0; b < dim; ++b) {
          gradient[comp * dim + b] += coef * eb.q1_grad(b, c);
        }
      }
    }
  }
  if (dofmap.with_bubbles) {
    for (int j = 0; j < dim; ++j) {
      const double coef = u[dofmap.bubble_dof(elem, j)];
      value[j] += coef * eb.enr[j];
      if (gradient) {
        for (int b = 0; b < dim; ++b) {
          gradient[j * dim + b] += coef * eb.enr_grad(b, j);
        }
      }
    }
  }
}

double point_displacement(const Mesh& mesh, const DofMap& dofmap,
                          const Eigen::VectorXd& u, const double* x,
                          int comp) {
  const int elem = locate_point(mesh, x);
  if (elem < 0) {
    throw std::invalid_argument(
        "point_displacement: point lies outside the mesh");
  }
  double xhat[3];
  invert_element_map(mesh, elem, x, xhat);
  double value[3];
  eval_fe_velocity(mesh, dofmap, u, elem, xhat, value);
  return value[comp];
}

ErrorRecord compute_errors(const Mesh& mesh, const DualMesh& dual,
                           const DofMap& dofmap, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& p, const ExactSolution& exact,
                           int quad_points) {
  const int dim = mesh.dim;
  const QuadratureRule rule = gauss_rule(dim, quad_points);

  double l2 = 0.0, h1s = 0.0;
  double uval[3], ugrad[9], eval_[3], egrad[9];
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int q = 0; q < rule.size(); ++q) {
      const ElementJacobian jac =
          element_jacobian(mesh, e, rule.points[q].data());
      eval_fe_velocity(mesh, dofmap, u, e, rule.points[q].data(), uval, ugrad);
      exact.displacement(jac.x.data(), eval_);
      exact.gradient(jac.x.data(), egrad);
      const double w = rule.weights[q] * jac.det;
      for (int a = 0; a < dim; ++a) {
        const double d = uval[a] - eval_[a];
        l2 += w * d * d;
        for (int b = 0; b < dim; ++b) {
          const double dg = ugrad[a * dim + b] - egrad[a * dim + b];
          h1s += w * dg * dg;
        }
      }
    }
  }

  double pl2 = 0.0;
  const int nc = mesh.corners_per_element();
  std::vector<QuadratureRule> rules;
  for (int c = 0; c < nc; ++c) rules.push_back(sub_box_rule(dim, c, quad_points));
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int c = 0; c < nc; ++c) {
      const double pc = p[mesh.element_vertex(e, c)];
      const QuadratureRule& r = rules[c];
      for (int q = 0; q < r.size(); ++q) {
        const ElementJacobian jac =
            element_jacobian(mesh, e, r.points[q].data());
        const double d = exact.pressure(jac.x.data()) - pc;
        pl2 += r.weights[q] * jac.det * d * d;
      }
    }
  }

  ErrorRecord rec;
  rec.u_l2 = std::sqrt(l2);
  rec.u_h1_semi = std::sqrt(h1s);
  rec.u_h1 = std::sqrt(l2 + h1s);
  rec.p_l2 = std::sqrt(pl2);
  return rec;
}

Eigen::VectorXd interpolate_velocity(
    const Mesh& mesh, const DofMap& dofmap,
    const std::function<void(const double* x, double* u)>& u,
    bool project_bubbles) {
  const int dim = mesh.dim;
  Eigen::VectorXd vec = Eigen::VectorXd::Zero(dofmap.n_velocity_dofs());
  std::vector<double> val(dim);
  for (int v = 0; v < mesh.n_vertices(); ++v) {
    u(&mesh.vertices[static_cast<std::size_t>(dim) * v], val.data());
    for (int comp = 0; comp < dim; ++comp) {
      vec[dofmap.vertex_dof(v, comp)] = val[comp];
    }
  }
  if (!dofmap.with_bubbles || !project_bubbles) return vec;

  // Per element, fit the bubble coefficients to the interpolation remainder.
  // The enrichment fields are mutually orthogonal (disjoint components), so
  // the local projection decouples into dim scalar problems.
  const QuadratureRule rule = gauss_rule(dim, 4);
  const int nc = mesh.corners_per_element();
  for (int e = 0; e < mesh.n_elements(); ++e) {
    Eigen::VectorXd num = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd den = Eigen::VectorXd::Zero(dim);
    for (int q = 0; q < rule.size(); ++q) {
      const ElementBasis eb = eval_element_basis(mesh, e, rule.points[q].data());
      const double w = rule.weights[q] * eb.detJ;
      u(eb.x.data(), val.data());
      for (int j = 0; j < dim; ++j) {
        double q1part = 0.0;
        for (int c = 0; c < nc; ++c) {
          q1part += vec[dofmap.vertex_dof(mesh.element_vertex(e, c), j)] *
                    eb.q1[c];
        }
        num[j] += w * eb.enr[j] * (val[j] - q1part);
        den[j] += w * eb.enr[j] * eb.enr[j];
      }
    }
    for (int j = 0; j < dim; ++j) {
      if (den[j] > 0.0) vec[dofmap.bubble_dof(e, j)] = num[j] / den[j];
    }
  }
  return vec;
}

Eigen::VectorXd project_pressure(const Mesh& mesh, const DualMesh& dual,
                                 const std::function<double(const double*)>& p) {
  const int dim = mesh.dim;
  const int nc = mesh.corners_per_element();
  Eigen::VectorXd num = Eigen::VectorXd::Zero(mesh.n_vertices());
  std::vector<QuadratureRule> rules;
  for (int c = 0; c < nc; ++c) rules.push_back(sub_box_rule(dim, c, 4));
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int c = 0; c < nc; ++c) {
      const QuadratureRule& r = rules[c];
      double s = 0.0;
      for (int q = 0; q < r.size(); ++q) {
        const ElementJacobian jac =
            element_jacobian(mesh, e, r.points[q].data());
        s += r.weights[q] * jac.det * p(jac.x.data());
      }
      num[mesh.element_vertex(e, c)] += s;
    }
  }
  for (int v = 0; v < mesh.n_vertices(); ++v) num[v] /= dual.cell_volumes[v];
  return num;
}

// --- patch rank test --------------------------------------------------------

PatchRankResult patch_rank_test(int dim, PatchVariant variant,
                                const std::vector<double>& lengths,
                                const std::vector<double>& origin) {
  std::vector<double> len = lengths;
  if (len.empty()) len.assign(dim, 1.0);
  const std::vector<int> counts(dim, 2);
  const Mesh mesh = generate_rect_grid(len, counts, origin);
  const DualMesh dual = build_dual(mesh);
  const DofMap dofmap = build_dofmap(mesh, dual, true);

  const EnrichmentVariant ev = variant == PatchVariant::plain_bubble
                                   ? EnrichmentVariant::plain_bubble
                                   : EnrichmentVariant::gradient_weighted;
  const SpMat B = assemble_B(mesh, dual, dofmap, ev);

  // Dense patch matrix over the free velocity dofs.
  std::vector<int> free_dofs;
  for (int i = 0; i < dofmap.n_velocity_dofs(); ++i) {
    if (!dofmap.dirichlet[i]) free_dofs.push_back(i);
  }
  const int np = dofmap.n_pressure_dofs();
  Eigen::MatrixXd Bp(np, free_dofs.size());
  for (std::size_t j = 0; j < free_dofs.size(); ++j) {
    Bp.col(j) = Eigen::VectorXd(B.col(free_dofs[j]));
  }

  if (variant == PatchVariant::scalar_bubble) {
    // One dof per element: the dim bubble columns collapse into their sum,
    // div(grad(phi_T) b_T) = sum_j d/dx_j ((d phi_T/d x_j) b_T).
    const int n_center = static_cast<int>(free_dofs.size()) -
                         dim * mesh.n_elements();
    Eigen::MatrixXd Bs(np, n_center + mesh.n_elements());
    Bs.leftCols(n_center) = Bp.leftCols(n_center);
    for (int e = 0; e < mesh.n_elements(); ++e) {
      Eigen::VectorXd col = Eigen::VectorXd::Zero(np);
      for (int j = 0; j < dim; ++j) {
        col += Bp.col(n_center + dim * e + j);
      }
      Bs.col(n_center + e) = col;
    }
    Bp.swap(Bs);
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bp);
  const Eigen::VectorXd sv = svd.singularValues();

  PatchRankResult res;
  res.n_pressures = np;
  res.n_free_velocity = static_cast<int>(Bp.cols());
  res.singular_values = sv;
  const double tol = 1e-10 * (sv.size() > 0 ? sv[0] : 0.0);
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > tol) ++res.rank;
  }
  res.kernel_dim = np - res.rank;
  return res;
}

// --- numerical inf-sup test -------------------------------------------------

bool InfSupReport::has_spurious_modes() const {
  for (const InfSupLevel& lvl : levels) {
    if (lvl.n_zero_modes != 1) return true;
  }
  return false;
}

InfSupReport inf_sup_test(const std::vector<Mesh>& meshes) {
  InfSupReport report;
  for (const Mesh& mesh : meshes) {
    const DualMesh dual = build_dual(mesh);
    const DofMap dofmap = build_dofmap(mesh, dual, true);
    const SpMat B = assemble_B(mesh, dual, dofmap);
    const SpMat G = assemble_velocity_gram(mesh, dofmap);
    const Eigen::VectorXd C = assemble_C(dual);

    std::vector<int> free_of(dofmap.n_velocity_dofs(), -1);
    int nfree = 0;
    for (int i = 0; i < dofmap.n_velocity_dofs(); ++i) {
      if (!dofmap.dirichlet[i]) free_of[i] = nfree++;
    }
    const int np = dofmap.n_pressure_dofs();

    InfSupLevel lvl;
    lvl.h = max_element_diameter(mesh);
    lvl.n_pressures = np;
    lvl.n_free_velocity = nfree;

    // Compact free-dof restrictions of B and G.
    std::vector<Eigen::Triplet<double>> tb, tg;
    for (int k = 0; k < B.outerSize(); ++k) {
      for (SpMat::InnerIterator it(B, k); it; ++it) {
        if (free_of[it.col()] >= 0) {
          tb.emplace_back(static_cast<int>(it.row()), free_of[it.col()],
                          it.value());
        }
      }
    }
    for (int k = 0; k < G.outerSize(); ++k) {
      for (SpMat::InnerIterator it(G, k); it; ++it) {
        if (free_of[it.row()] >= 0 && free_of[it.col()] >= 0) {
          tg.emplace_back(free_of[it.row()], free_of[it.col()], it.value());
        }
      }
    }
    SpMat Bf(np, nfree), Gf(nfree, nfree);
    Bf.setFromTriplets(tb.begin(), tb.end());
    Gf.setFromTriplets(tg.begin(), tg.end());

    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(np, np);
    if (nfree > 0) {
      SpdSolver gram;
      gram.factor(Gf, "inf_sup_test: velocity Gram");
      const SpMat Bt = Bf.transpose();
      for (int i = 0; i < np; ++i) {
        const Eigen::VectorXd z = gram.solve(Eigen::VectorXd(Bt.col(i)));
        M.col(i) = Bf * z;
      }
      M = 0.5 * (M + M.transpose()).eval();
    }

    const Eigen::VectorXd ci = C.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd W = ci.asDiagonal() * M * ci.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
    if (es.info() != Eigen::Success) {
      throw std::runtime_error("inf_sup_test: dense eigensolver failed");
    }
    const Eigen::VectorXd ev = es.eigenvalues();  // ascending
    const double emax = std::max(ev.cwiseAbs().maxCoeff(), 0.0);
    const double tol = 1e-10 * emax;

    int nzero = 0;
    double beta2 = 0.0;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev[i] <= tol) {
        ++nzero;
      } else {
        beta2 = ev[i];
        break;
      }
    }
    lvl.n_zero_modes = nzero;
    lvl.beta = beta2 > 0.0 ? std::sqrt(beta2) : 0.0;
    report.levels.push_back(lvl);
  }
  return report;
}

// --- benchmarks -------------------------------------------------------------

double max_element_diameter(const Mesh& mesh) {
  const int dim = mesh.dim;
  const int nc = mesh.corners_per_element();
  double hmax = 0.0;
  for (int e = 0; e < mesh.n_elements(); ++e) {
    for (int c1 = 0; c1 < nc; ++c1) {
      for (int c2 = c1 + 1; c2 < nc; ++c2) {
        const std::int32_t v1 = mesh.element_vertex(e, c1);
        const std::int32_t v2 = mesh.element_vertex(e, c2);
        double d2 = 0.0;
        for (int a = 0; a < dim; ++a) {
          const double d = mesh.vertex(v1, a) - mesh.vertex(v2, a);
          d2 += d * d;
        }
        hmax = std::max(hmax, std::sqrt(d2));
      }
    }
  }
  return hmax;
}

namespace {

// Runs one level function over [0, levels) with a bounded thread count;
// results land in fixed slots, so the report is deterministic.
void run_levels(int levels, int threads,
                const std::function<ConvergenceLevel(int)>& run,
                std::vector<ConvergenceLevel>& out) {
  out.resize(levels);
  if (threads <= 1) {
    for (int k = 0; k < levels; ++k) out[k] = run(k);
    return;
  }
  for (int k0 = 0; k0 < levels; k0 += threads) {
    const int k1 = std::min(levels, k0 + threads);
    std::vector<std::future<ConvergenceLevel>> futures;
    for (int k = k0; k < k1; ++k) {
      futures.push_back(std::async(std::launch::async, run, k));
    }
    for (int k = k0; k < k1; ++k) out[k] = futures[k - k0].get();
  }
}

ConvergenceLevel solve_beam_level(const BeamParams& params, int k, RunMode mode,
                                  BeamBc bc, double tol, int nx, int ny) {
  const Mesh mesh = generate_rect_grid({params.L, params.l}, {nx, ny});
  const DualMesh dual = build_dual(mesh);
  const ExactSolution exact = beam_exact(params);
  const MaterialParams mat = lame_from_E_nu(params.E, params.nu);

  ConvergenceLevel lvl;
  lvl.level = k;
  lvl.n_elems = mesh.n_elements();
  lvl.h = max_element_diameter(mesh);

  DofMap dofmap = build_dofmap(mesh, dual, mode == RunMode::mixed);
  std::map<std::string, TractionFn> tractions;
  if (bc == BeamBc::dirichlet) {
    dofmap.set_dirichlet_values(mesh, exact.displacement);
  } else {
    dofmap.clear_dirichlet();
    // x=0: zero horizontal displacement; the point (0,0) pins u_y; the
    // couple sigma_xx = f (l-2y)/l acts on x=L. Top/bottom are traction
    // free, which the exact stress satisfies.
    for (int v = 0; v < mesh.n_vertices(); ++v) {
      if (std::abs(mesh.vertex(v, 0)) < 1e-12) {
        dofmap.constrain(dofmap.vertex_dof(v, 0), 0.0);
        if (std::abs(mesh.vertex(v, 1)) < 1e-12) {
          dofmap.constrain(dofmap.vertex_dof(v, 1), 0.0);
        }
      }
    }
    const double f = params.f, l = params.l;
    tractions["x1"] = [f, l](const double* x, double* t) {
      t[0] = f * (l - 2.0 * x[1]) / l;
      t[1] = 0.0;
    };
  }

  if (mode == RunMode::mixed) {
    SystemMatrices sys =
        assemble_system(mesh, dual, dofmap, mat, nullptr, tractions);
    apply_dirichlet(sys, dofmap);
    const Solution sol = condense_and_solve(sys, mat, tol);
    lvl.err = compute_errors(mesh, dual, dofmap, sol.u, sol.p, exact);
    const ErrorRecord norms = compute_errors(mesh, dual, dofmap, sol.u, sol.p,
                                             zero_solution(mesh.dim));
    lvl.u_h1_norm = norms.u_h1;
    lvl.p_l2_norm = norms.p_l2;
  } else {
    SpMat K = assemble_standard_Q1(mesh, dofmap, mat);
    Eigen::VectorXd f = assemble_load(mesh, dofmap, nullptr, tractions);
    apply_dirichlet(K, f, dofmap);
    SpdSolver solver;
    solver.factor(K, "run_beam: standard Q1 stiffness");
    const Eigen::VectorXd u = solver.solve(f);
    // Dual-cell pressure recovery p_i = lambda/|V_i| int_{V_i} div u.
    const SpMat B = assemble_B(mesh, dual, dofmap);
    const Eigen::VectorXd p =
        mat.lambda * assemble_C(dual).cwiseInverse().cwiseProduct(B * u);
    lvl.err = compute_errors(mesh, dual, dofmap, u, p, exact);
    const ErrorRecord norms =
        compute_errors(mesh, dual, dofmap, u, p, zero_solution(mesh.dim));
    lvl.u_h1_norm = norms.u_h1;
    lvl.p_l2_norm = norms.p_l2;
  }
  return lvl;
}

}  // namespace

ConvergenceReport run_beam(const BeamParams& params, int levels, RunMode mode,
                           BeamBc bc, double tol, int base_nx, int base_ny,
                           int threads) {
  if (levels < 2) throw std::invalid_argument("run_beam: levels must be >= 2");
  ConvergenceReport report;
  run_levels(
      levels, threads,
      [&](int k) {
        return solve_beam_level(params, k, mode, bc, tol, base_nx << k,
                                base_ny << k);
      },
      report.levels);
  return report;
}

namespace {

ConvergenceLevel solve_cook_level(const CookParams& params, int k, RunMode mode,
                                  CookTip tip, double tol) {
  const int n = 2 << k;
  const Mesh mesh = generate_cook_mesh(n);
  const DualMesh dual = build_dual(mesh);
  const MaterialParams mat = lame_from_E_nu(params.E, params.nu);

  ConvergenceLevel lvl;
  lvl.level = k;
  lvl.n_elems = mesh.n_elements();
  lvl.h = max_element_diameter(mesh);

  DofMap dofmap = build_dofmap(mesh, dual, mode == RunMode::mixed);
  std::map<std::string, TractionFn> tractions;
  const double ty = params.load / 16.0;  // right edge has length 16
  tractions["load"] = [ty](const double*, double* t) {
    t[0] = 0.0;
    t[1] = ty;
  };

  Eigen::VectorXd u;
  if (mode == RunMode::mixed) {
    SystemMatrices sys =
        assemble_system(mesh, dual, dofmap, mat, nullptr, tractions);
    apply_dirichlet(sys, dofmap);
    const Solution sol = condense_and_solve(sys, mat, tol);
    u = sol.u;
    const ErrorRecord norms = compute_errors(mesh, dual, dofmap, sol.u, sol.p,
                                             zero_solution(mesh.dim));
    lvl.u_h1_norm = norms.u_h1;
    lvl.p_l2_norm = norms.p_l2;
  } else {
    SpMat K = assemble_standard_Q1(mesh, dofmap, mat);
    Eigen::VectorXd f = assemble_load(mesh, dofmap, nullptr, tractions);
    apply_dirichlet(K, f, dofmap);
    SpdSolver solver;
    solver.factor(K, "run_cook: standard Q1 stiffness");
    u = solver.solve(f);
  }

  const double tip_xy[2] = {48.0, tip == CookTip::corner ? 60.0 : 52.0};
  lvl.tip = point_displacement(mesh, dofmap, u, tip_xy, 1);
  return lvl;
}

}  // namespace

ConvergenceReport run_cook(const CookParams& params, int levels, RunMode mode,
                           CookTip tip, double tol, int threads) {
  if (levels < 2) throw std::invalid_argument("run_cook: levels must be >= 2");
  ConvergenceReport report;
  run_levels(
      levels, threads,
      [&](int k) { return solve_cook_level(params, k, mode, tip, tol); },
      report.levels);
  return report;
}

}  // namespace dualpress
