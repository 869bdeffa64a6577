// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The dualpress authors

#include "dualpress/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <stdexcept>

#include "dualpress/analysis.hpp"
#include "dualpress/report_io.hpp"
#include "dualpress/vtk.hpp"

namespace dualpress {

int env_thread_cap() {
  const char* env = std::getenv("DUALPRESS_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

namespace {

int usage_error(const std::string& message) {
  std::cerr << "error: " << message << "\n";
  return 2;
}

bool parse_mode(const RunConfig& config, bool& mixed, bool& standard) {
  mixed = config.mode == "mixed" || config.mode == "both";
  standard = config.mode == "standard" || config.mode == "both";
  return mixed || standard;
}

void emit_csv(const RunConfig& config, const std::string& csv) {
  if (config.out.empty()) {
    std::cout << csv;
  } else {
    write_text_file(config.out, csv);
  }
}

/// Re-solves the finest beam/cook level through the mixed method and writes
/// displacement + dual-cell pressure as VTK point data.
void export_vtk_fields(const RunConfig& config, const Mesh& mesh,
                       const Eigen::VectorXd& u, const Eigen::VectorXd& p,
                       int dim) {
  VtkField disp{"displacement", dim, {}};
  disp.data.assign(u.data(), u.data() + static_cast<std::ptrdiff_t>(dim) *
                                             (mesh.n_vertices()));
  VtkField pres{"pressure", 1, {}};
  pres.data.assign(p.data(), p.data() + mesh.n_vertices());
  write_vtk(config.vtk, mesh, {disp, pres});
}

}  // namespace

int cmd_beam(const RunConfig& config) {
  bool mixed = false, standard = false;
  if (!parse_mode(config, mixed, standard)) {
    return usage_error("--mode must be mixed, standard or both");
  }
  if (config.bc != "dirichlet" && config.bc != "paper") {
    return usage_error("--bc must be dirichlet or paper");
  }
  if (config.levels < 2) return usage_error("--levels must be >= 2");

  BeamParams params;
  if (config.nu >= 0.0) params.nu = config.nu;
  if (config.E > 0.0) params.E = config.E;
  if (config.load > 0.0) params.f = config.load;
  const BeamBc bc = config.bc == "paper" ? BeamBc::paper : BeamBc::dirichlet;

  try {
    ConvergenceReport mixed_rep, std_rep;
    if (mixed) {
      mixed_rep = run_beam(params, config.levels, RunMode::mixed, bc,
                           config.tol, 4, 2, config.threads);
    }
    if (standard) {
      std_rep = run_beam(params, config.levels, RunMode::standard, bc,
                         config.tol, 4, 2, config.threads);
    }
    const ConvergenceReport& primary = mixed ? mixed_rep : std_rep;
    const ConvergenceReport* secondary =
        (mixed && standard) ? &std_rep : nullptr;
    emit_csv(config, csv_beam(primary, secondary));

    if (!config.plot.empty()) {
      std::vector<PlotSeries> series;
      auto add = [&](const ConvergenceReport& rep, const std::string& tag) {
        PlotSeries l2{"u L2 " + tag, {}, {}}, h1{"u H1 " + tag, {}, {}},
            pl2{"p L2 " + tag, {}, {}};
        for (const ConvergenceLevel& lvl : rep.levels) {
          l2.x.push_back(lvl.n_elems);
          l2.y.push_back(lvl.err.u_l2);
          h1.x.push_back(lvl.n_elems);
          h1.y.push_back(lvl.err.u_h1);
          pl2.x.push_back(lvl.n_elems);
          pl2.y.push_back(lvl.err.p_l2);
        }
        series.push_back(l2);
        series.push_back(h1);
        series.push_back(pl2);
      };
      if (mixed) add(mixed_rep, "mixed");
      if (standard) add(std_rep, "standard");
      write_text_file(config.plot,
                      svg_plot(series, "elements", "error", true, true));
    }

    if (!config.vtk.empty()) {
      // Finest-level mixed (or standard) field export.
      const int k = config.levels - 1;
      const Mesh mesh =
          generate_rect_grid({params.L, params.l}, {4 << k, 2 << k});
      const DualMesh dual = build_dual(mesh);
      DofMap dofmap = build_dofmap(mesh, dual, mixed);
      const ExactSolution exact = beam_exact(params);
      const MaterialParams mat = lame_from_E_nu(params.E, params.nu);
      dofmap.set_dirichlet_values(mesh, exact.displacement);
      Eigen::VectorXd u, p;
      if (mixed) {
        SystemMatrices sys = assemble_system(mesh, dual, dofmap, mat);
        apply_dirichlet(sys, dofmap);
        const Solution sol = condense_and_solve(sys, mat, config.tol);
        u = sol.u;
        p = sol.p;
      } else {
        SpMat K = assemble_standard_Q1(mesh, dofmap, mat);
        Eigen::VectorXd f = Eigen::VectorXd::Zero(dofmap.n_velocity_dofs());
        apply_dirichlet(K, f, dofmap);
        SpdSolver solver;
        solver.factor(K, "cmd_beam vtk export");
        u = solver.solve(f);
        const SpMat B = assemble_B(mesh, dual, dofmap);
        p = mat.lambda * assemble_C(dual).cwiseInverse().cwiseProduct(B * u);
      }
      export_vtk_fields(config, mesh, u, p, mesh.dim);
    }
  } catch (const std::exception& err) {
    std::cerr << "solver failure: " << err.what() << "\n";
    return 3;
  }
  return 0;
}

int cmd_cook(const RunConfig& config) {
  bool mixed = false, standard = false;
  if (!parse_mode(config, mixed, standard)) {
    return usage_error("--mode must be mixed, standard or both");
  }
  if (config.tip != "corner" && config.tip != "midedge") {
    return usage_error("--tip must be corner or midedge");
  }
  if (config.levels < 2) return usage_error("--levels must be >= 2");

  CookParams params;
  if (config.nu >= 0.0) params.nu = config.nu;
  if (config.E > 0.0) params.E = config.E;
  if (config.load > 0.0) params.load = config.load;
  const CookTip tip =
      config.tip == "midedge" ? CookTip::midedge : CookTip::corner;

  try {
    ConvergenceReport mixed_rep, std_rep;
    if (mixed) {
      mixed_rep = run_cook(params, config.levels, RunMode::mixed, tip,
                           config.tol, config.threads);
    }
    if (standard) {
      std_rep = run_cook(params, config.levels, RunMode::standard, tip,
                         config.tol, config.threads);
    }
    const ConvergenceReport& primary = mixed ? mixed_rep : std_rep;
    const ConvergenceReport* secondary =
        (mixed && standard) ? &std_rep : nullptr;
    emit_csv(config, csv_cook(primary, secondary));

    if (!config.plot.empty()) {
      std::vector<PlotSeries> series;
      auto add = [&](const ConvergenceReport& rep, const std::string& tag) {
        PlotSeries s{"tip " + tag, {}, {}};
        for (const ConvergenceLevel& lvl : rep.levels) {
          s.x.push_back(2 << lvl.level);
          s.y.push_back(lvl.tip);
        }
        series.push_back(s);
      };
      if (mixed) add(mixed_rep, "mixed");
      if (standard) add(std_rep, "standard");
      write_text_file(
          config.plot,
          svg_plot(series, "elements per edge", "tip displacement", true,
                   false));
    }

    if (!config.vtk.empty()) {
      const int n = 2 << (config.levels - 1);
      const Mesh mesh = generate_cook_mesh(n);
      const DualMesh dual = build_dual(mesh);
      DofMap dofmap = build_dofmap(mesh, dual, mixed);
      const MaterialParams mat = lame_from_E_nu(params.E, params.nu);
      std::map<std::string, TractionFn> tractions;
      const double ty = params.load / 16.0;
      tractions["load"] = [ty](const double*, double* t) {
        t[0] = 0.0;
        t[1] = ty;
      };
      Eigen::VectorXd u, p;
      if (mixed) {
        SystemMatrices sys =
            assemble_system(mesh, dual, dofmap, mat, nullptr, tractions);
        apply_dirichlet(sys, dofmap);
        const Solution sol = condense_and_solve(sys, mat, config.tol);
        u = sol.u;
        p = sol.p;
      } else {
        SpMat K = assemble_standard_Q1(mesh, dofmap, mat);
        Eigen::VectorXd f = assemble_load(mesh, dofmap, nullptr, tractions);
        apply_dirichlet(K, f, dofmap);
        SpdSolver solver;
        solver.factor(K, "cmd_cook vtk export");
        u = solver.solve(f);
        const SpMat B = assemble_B(mesh, dual, dofmap);
        p = mat.lambda * assemble_C(dual).cwiseInverse().cwiseProduct(B * u);
      }
      export_vtk_fields(config, mesh, u, p, mesh.dim);
    }
  } catch (const std::exception& err) {
    std::cerr << "solver failure: " << err.what() << "\n";
    return 3;
  }
  return 0;
}

int cmd_infsup(const RunConfig& config) {
  if (config.dim != 2 && config.dim != 3) {
    return usage_error("--dim must be 2 or 3");
  }
  if (config.levels < 1) return usage_error("--levels must be >= 1");

  try {
    std::vector<Mesh> meshes;
    for (int k = 0; k < config.levels; ++k) {
      const int n = (config.dim == 2 ? 4 : 2) << k;
      meshes.push_back(generate_rect_grid(std::vector<double>(config.dim, 1.0),
                                          std::vector<int>(config.dim, n)));
    }
    const InfSupReport report = inf_sup_test(meshes);
    emit_csv(config, csv_infsup(report));

    if (!config.plot.empty()) {
      PlotSeries s{"beta_h", {}, {}};
      for (const InfSupLevel& lvl : report.levels) {
        s.x.push_back(1.0 / lvl.h);
        s.y.push_back(lvl.beta);
      }
      write_text_file(config.plot,
                      svg_plot({s}, "1/h", "beta_h", true, false));
    }

    // Assertions: positivity, the Cauchy-Schwarz ceiling and uniformity
    // over the last three levels.
    bool ok = true;
    double bmin = 1e300, bmax = 0.0;
    for (std::size_t k = 0; k < report.levels.size(); ++k) {
      const InfSupLevel& lvl = report.levels[k];
      if (!(lvl.beta > 0.0) || lvl.n_zero_modes != 1 ||
          lvl.beta > std::sqrt(static_cast<double>(config.dim)) + 1e-12) {
        ok = false;
      }
      if (k + 3 >= report.levels.size()) {
        bmin = std::min(bmin, lvl.beta);
        bmax = std::max(bmax, lvl.beta);
      }
    }
    if (report.levels.size() >= 3 && bmin < 0.75 * bmax) ok = false;
    if (!ok) {
      std::cerr << "inf-sup assertion failed: beta values";
      for (const InfSupLevel& lvl : report.levels) {
        std::cerr << " " << format_number(lvl.beta) << "(zm"
                  << lvl.n_zero_modes << ")";
      }
      std::cerr << "\n";
      return 1;
    }
  } catch (const std::exception& err) {
    std::cerr << "solver failure: " << err.what() << "\n";
    return 3;
  }
  return 0;
}

int cmd_patch(const RunConfig& config) {
  if (config.dim != 2 && config.dim != 3) {
    return usage_error("--dim must be 2 or 3");
  }
  try {
    const PatchRankResult gw =
        patch_rank_test(config.dim, PatchVariant::gradient_weighted);
    const PatchRankResult plain =
        patch_rank_test(config.dim, PatchVariant::plain_bubble);

    std::ostringstream os;
    os << "dim=" << config.dim << "\n";
    os << "pressures=" << gw.n_pressures << "\n";
    os << "free_velocity_dofs=" << gw.n_free_velocity << "\n";
    os << "gradient_weighted.rank=" << gw.rank << "\n";
    os << "gradient_weighted.kernel=" << gw.kernel_dim << "\n";
    os << "plain_bubble.rank=" << plain.rank << "\n";
    os << "plain_bubble.kernel=" << plain.kernel_dim << "\n";
    if (config.out.empty()) {
      std::cout << os.str();
    } else {
      write_text_file(config.out, os.str());
    }

    const bool ok = gw.kernel_dim == 1 && plain.rank < gw.rank;
    if (!ok) {
      std::cerr << "patch assertion failed: gradient-weighted kernel="
                << gw.kernel_dim << ", plain rank=" << plain.rank
                << " vs gradient-weighted rank=" << gw.rank << "\n";
      return 1;
    }
  } catch (const std::exception& err) {
    std::cerr << "solver failure: " << err.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace dualpress
